#pragma once

#include <complex>
#include <vector>

namespace cavity {

using cplx = std::complex<double>;

/// Net displacement and accumulated phase of a sequence of displacements.
struct DisplacementPhase {
    cplx net;
    double phase = 0.0;  // radians
};

/// D(alpha) D(beta) = D(alpha + beta) exp(i Im(alpha conj(beta))).
/// beta acts first.
DisplacementPhase compose_displacements(cplx alpha, cplx beta);

/// Piecewise-linear path in single-mode phase space, stored as vertices.
///
/// Phases are computed from the increments between consecutive vertices,
/// i.e. the path is implicitly started at the identity displacement. The
/// start vertex is therefore a gauge choice and the result is translation
/// invariant.
class PhasePath {
public:
    /// Throws std::domain_error for fewer than two vertices, non-finite
    /// vertices, or (closed == true) with first and last vertex more than
    /// 1e-12 apart.
    PhasePath(std::vector<cplx> vertices, bool closed);

    static PhasePath polygon(std::vector<cplx> corners);  // closes the loop
    static PhasePath circle(cplx center, double radius, int segments, bool counterclockwise = true);

    const std::vector<cplx>& vertices() const { return vertices_; }
    bool closed() const { return closed_; }

    PhasePath reversed() const;
    /// Vertices of this path followed by `tail` shifted so that it starts at
    /// this path's end.
    PhasePath concatenated(const PhasePath& tail) const;
    PhasePath translated(cplx offset) const;

private:
    std::vector<cplx> vertices_;
    bool closed_ = false;
};

/// net = sum of increments; phase = Im sum_{i>=2} da_i conj(sum_{j<i} da_j).
DisplacementPhase path_phase(const PhasePath& path);

/// Geometric phase of a closed path; throws std::domain_error if the path is
/// not closed.
double closed_path_phase(const PhasePath& path);

/// Numerical check of the composition law in a Fock space truncated at
/// n_max photons: returns max |(D(a)D(b) - D(a+b) e^{i Im(a b*)})_{ij}| over
/// the lowest n_max/3 Fock levels, which are unaffected by truncation.
///
/// Requires n_max >= 20 and |alpha|, |beta| <= sqrt(n_max)/3.5; throws
/// std::domain_error otherwise.
double verify_displacement_law(cplx alpha, cplx beta, int n_max);

}  // namespace cavity
