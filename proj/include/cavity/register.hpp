#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cavity {

using cplx = std::complex<double>;

/// Dense state vector of the M x N qubit array.
///
/// Site (m, n) is qubit m * N + n, i.e. bit (m * N + n) of the basis index.
/// Bit 0 is |up>, the +1 eigenstate of sigma^z.
class QubitRegister {
public:
    static constexpr int kMaxQubits = 24;

    /// All qubits up. Throws std::invalid_argument beyond kMaxQubits.
    QubitRegister(int rows, int cols);
    /// Takes ownership of `amplitudes`; their norm must be 1 within 1e-10.
    QubitRegister(int rows, int cols, std::vector<cplx> amplitudes);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int qubits() const { return rows_ * cols_; }
    std::size_t size() const { return amps_.size(); }
    int site(int m, int n) const;

    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes() { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[i]; }

    double norm() const;
    void normalize();

    bool same_shape(const QubitRegister& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }

private:
    int rows_;
    int cols_;
    std::vector<cplx> amps_;
};

cplx overlap(const QubitRegister& bra, const QubitRegister& ket);

/// Tensor product of Pauli letters with an overall phase i^k.
class PauliString {
public:
    enum class Letter : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

    explicit PauliString(int qubits);
    /// e.g. "XZIZ" or "-XZ"; letter i acts on qubit i.
    static PauliString parse(std::string_view text);

    int qubits() const { return static_cast<int>(letters_.size()); }
    Letter at(int q) const { return letters_[static_cast<std::size_t>(q)]; }
    PauliString& set(int q, Letter letter);
    /// Multiplies the overall phase by i^quarter_turns.
    PauliString& rotate_phase(int quarter_turns);
    cplx phase() const;

    std::uint32_t x_mask() const;  // X or Y
    std::uint32_t z_mask() const;  // Z or Y
    int y_count() const;

    std::string str() const;

private:
    std::vector<Letter> letters_;
    int phase_ = 0;  // i^phase_
};

using Matrix2 = std::array<std::array<cplx, 2>, 2>;

}  // namespace cavity
