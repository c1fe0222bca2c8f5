#pragma once

#include <array>
#include <utility>
#include <vector>

#include "cavity/geomphase.hpp"
#include "cavity/kernels.hpp"
#include "cavity/register.hpp"

namespace cavity {

enum class Spin { up, down };

using SingleQubitState = std::array<cplx, 2>;

/// Every qubit in |up> (or |down>).
QubitRegister product_state(int rows, int cols, Spin spin);
/// Product of arbitrary normalised single-qubit states, one per site.
QubitRegister product_state(int rows, int cols, const std::vector<SingleQubitState>& sites);

/// Unordered site pairs (a < b) and their sigma^x sigma^x coefficients from
/// `table`. With nn_only, only pairs at lattice distance 1 (periodic wrap)
/// are kept; on a lattice dimension of 2 the wrapped and direct neighbour
/// coincide and the pair appears once.
std::vector<kernels::XXCoupling> interaction_pairs(const PhaseShiftTable& table, bool nn_only);

/// register <- prod_pairs exp(i Gamma_ab X_a X_b) register. All factors
/// commute. Throws std::invalid_argument if the table and register shapes
/// differ.
void apply_pairwise_xx(QubitRegister& reg, const PhaseShiftTable& table, bool nn_only,
                       Execution exec = Execution::parallel);

/// Nearest-neighbour edges (a < b) of the M x N grid graph.
std::vector<std::pair<int, int>> lattice_edges(int rows, int cols, bool periodic);

/// prod_edges CZ |+>^{MN}.
QubitRegister reference_cluster(int rows, int cols, bool periodic);
/// prod_edges CZ applied to an arbitrary product input.
QubitRegister graph_state(int rows, int cols, bool periodic, const std::vector<SingleQubitState>& sites);

/// Site-local angle of the z rotation in the cluster correction:
/// exp(i angle Z) H maps the XX-Ising state at Gamma = pi/4 onto the graph
/// state. Depends only on the vertex degree: angle = -pi degree / 4.
double cluster_correction_angle(int degree);

/// Applies prod_a exp(i angle(deg a) Z_a) H_a in place.
void apply_cluster_correction(QubitRegister& reg, bool periodic);
/// Inverse of apply_cluster_correction.
void undo_cluster_correction(QubitRegister& reg, bool periodic);

/// |<reference | C_local | generated>|^2.
double cluster_fidelity(const QubitRegister& generated, bool periodic);

/// <psi| P |psi>, real part. Throws std::invalid_argument on length mismatch.
double stabilizer_expectation(const QubitRegister& reg, const PauliString& pauli);
/// X_a prod_{b ~ a} Z_b for the grid graph.
PauliString cluster_stabilizer(int rows, int cols, bool periodic, int site);

/// Partial trace over all qubits but `site`.
Matrix2 reduced_single_qubit(const QubitRegister& reg, int site);
/// Tr rho^2 of the single-site reduced state.
double single_site_purity(const QubitRegister& reg, int site);

}  // namespace cavity
