#include "cavity/phasespace.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cavity {

DisplacementPhase compose_displacements(cplx alpha, cplx beta) {
    return {alpha + beta, std::imag(alpha * std::conj(beta))};
}

PhasePath::PhasePath(std::vector<cplx> vertices, bool closed)
    : vertices_(std::move(vertices)), closed_(closed) {
    if (vertices_.size() < 2) throw std::domain_error("a phase-space path needs at least two vertices");
    for (const cplx& v : vertices_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::domain_error("phase-space path vertex is not finite");
        }
    }
    if (closed_ && std::abs(vertices_.front() - vertices_.back()) > 1e-12) {
        throw std::domain_error("closed path must end where it starts");
    }
}

PhasePath PhasePath::polygon(std::vector<cplx> corners) {
    if (!corners.empty()) corners.push_back(corners.front());
    return PhasePath(std::move(corners), true);
}

PhasePath PhasePath::circle(cplx center, double radius, int segments, bool counterclockwise) {
    if (segments < 3) throw std::domain_error("circle needs at least three segments");
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(segments) + 1);
    const double sign = counterclockwise ? 1.0 : -1.0;
    for (int j = 0; j < segments; ++j) {
        pts.push_back(center + std::polar(radius, sign * 2.0 * std::numbers::pi * j / segments));
    }
    pts.push_back(pts.front());
    return PhasePath(std::move(pts), true);
}

PhasePath PhasePath::reversed() const {
    return PhasePath(std::vector<cplx>(vertices_.rbegin(), vertices_.rend()), closed_);
}

PhasePath PhasePath::concatenated(const PhasePath& tail) const {
    std::vector<cplx> pts = vertices_;
    const cplx shift = vertices_.back() - tail.vertices_.front();
    for (std::size_t i = 1; i < tail.vertices_.size(); ++i) pts.push_back(tail.vertices_[i] + shift);
    const bool closes = std::abs(pts.front() - pts.back()) <= 1e-12;
    return PhasePath(std::move(pts), closed_ && tail.closed_ && closes);
}

PhasePath PhasePath::translated(cplx offset) const {
    std::vector<cplx> pts = vertices_;
    for (cplx& p : pts) p += offset;
    return PhasePath(std::move(pts), closed_);
}

DisplacementPhase path_phase(const PhasePath& path) {
    const auto& v = path.vertices();
    cplx partial{0.0, 0.0};
    double gamma = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const cplx step = v[i] - v[i - 1];
        gamma += std::imag(step * std::conj(partial));
        partial += step;
    }
    return {partial, gamma};
}

double closed_path_phase(const PhasePath& path) {
    if (!path.closed()) throw std::domain_error("geometric phase requires a closed path");
    return path_phase(path).phase;
}

namespace {

Eigen::MatrixXcd truncated_displacement(cplx alpha, int n_max) {
    const int dim = n_max + 1;
    Eigen::MatrixXcd generator = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        const double amp = std::sqrt(static_cast<double>(n));
        generator(n, n - 1) = alpha * amp;               // alpha a^dagger
        generator(n - 1, n) = -std::conj(alpha) * amp;   // -alpha* a
    }
    return generator.exp();
}

}  // namespace

double verify_displacement_law(cplx alpha, cplx beta, int n_max) {
    if (n_max < 20) throw std::domain_error("verify_displacement_law needs n_max >= 20");
    const double bound = std::sqrt(static_cast<double>(n_max)) / 3.5;
    if (std::abs(alpha) > bound || std::abs(beta) > bound) {
        throw std::domain_error("displacement too large for the Fock truncation");
    }
    const Eigen::MatrixXcd lhs = truncated_displacement(alpha, n_max) * truncated_displacement(beta, n_max);
    const cplx factor = std::polar(1.0, compose_displacements(alpha, beta).phase);
    const Eigen::MatrixXcd rhs = truncated_displacement(alpha + beta, n_max) * factor;
    const int window = n_max / 3;
    return (lhs - rhs).topLeftCorner(window, window).cwiseAbs().maxCoeff();
}

}  // namespace cavity
