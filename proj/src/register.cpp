#include "cavity/register.hpp"

#include <cmath>
#include <stdexcept>

#include "cavity/kernels.hpp"

namespace cavity {

namespace {

void check_dims(int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("register dimensions must be positive");
    if (rows * cols > QubitRegister::kMaxQubits) {
        throw std::invalid_argument("register of " + std::to_string(rows * cols) + " qubits exceeds the cap of " +
                                    std::to_string(QubitRegister::kMaxQubits));
    }
}

}  // namespace

QubitRegister::QubitRegister(int rows, int cols) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    amps_.assign(std::size_t{1} << qubits(), cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

QubitRegister::QubitRegister(int rows, int cols, std::vector<cplx> amplitudes)
    : rows_(rows), cols_(cols), amps_(std::move(amplitudes)) {
    check_dims(rows, cols);
    if (amps_.size() != (std::size_t{1} << qubits())) {
        throw std::invalid_argument("amplitude vector length does not match 2^(M N)");
    }
    if (std::abs(norm() - 1.0) > 1e-10) throw std::invalid_argument("amplitude vector is not normalised");
}

int QubitRegister::site(int m, int n) const {
    if (m < 0 || m >= rows_ || n < 0 || n >= cols_) throw std::out_of_range("site outside the lattice");
    return m * cols_ + n;
}

double QubitRegister::norm() const { return std::sqrt(kernels::parallel::norm_squared(amps_)); }

void QubitRegister::normalize() {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalise a zero state");
    for (cplx& a : amps_) a /= n;
}

cplx overlap(const QubitRegister& bra, const QubitRegister& ket) {
    if (!bra.same_shape(ket)) throw std::invalid_argument("overlap of registers with different shapes");
    return kernels::parallel::inner_product(bra.amplitudes(), ket.amplitudes());
}

// ---------------------------------------------------------------------------

PauliString::PauliString(int qubits) : letters_(static_cast<std::size_t>(qubits), Letter::I) {
    if (qubits < 0 || qubits > 32) throw std::invalid_argument("Pauli string length out of range");
}

PauliString PauliString::parse(std::string_view text) {
    int phase = 0;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        phase = text.front() == '-' ? 2 : 0;
        text.remove_prefix(1);
    }
    if (text.size() >= 1 && text.front() == 'i' && text.size() > 1) {
        phase += 1;
        text.remove_prefix(1);
    }
    PauliString p(static_cast<int>(text.size()));
    for (std::size_t i = 0; i < text.size(); ++i) {
        switch (text[i]) {
            case 'I': case '_': p.letters_[i] = Letter::I; break;
            case 'X': p.letters_[i] = Letter::X; break;
            case 'Y': p.letters_[i] = Letter::Y; break;
            case 'Z': p.letters_[i] = Letter::Z; break;
            default: throw std::invalid_argument(std::string("invalid Pauli letter '") + text[i] + "'");
        }
    }
    p.phase_ = phase % 4;
    return p;
}

PauliString& PauliString::set(int q, Letter letter) {
    letters_.at(static_cast<std::size_t>(q)) = letter;
    return *this;
}

PauliString& PauliString::rotate_phase(int quarter_turns) {
    phase_ = ((phase_ + quarter_turns) % 4 + 4) % 4;
    return *this;
}

cplx PauliString::phase() const {
    static constexpr std::array<cplx, 4> table{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
    return table[static_cast<std::size_t>(phase_)];
}

std::uint32_t PauliString::x_mask() const {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (letters_[i] == Letter::X || letters_[i] == Letter::Y) m |= 1U << i;
    }
    return m;
}

std::uint32_t PauliString::z_mask() const {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (letters_[i] == Letter::Z || letters_[i] == Letter::Y) m |= 1U << i;
    }
    return m;
}

int PauliString::y_count() const {
    int c = 0;
    for (Letter l : letters_) c += l == Letter::Y ? 1 : 0;
    return c;
}

std::string PauliString::str() const {
    static constexpr std::array<const char*, 4> prefix{"+", "+i", "-", "-i"};
    std::string s = prefix[static_cast<std::size_t>(phase_)];
    for (Letter l : letters_) s.push_back(static_cast<char>(l));
    return s;
}

}  // namespace cavity
