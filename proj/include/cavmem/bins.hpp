#pragma once

#include <cstddef>
#include <vector>

#include "cavmem/model.hpp"

namespace cavmem {

// Quadrature discretization of the spin-detuning distribution: bin centers at
// quantiles of the line shape, uniform weights. Built by discretize().
struct SpinBins {
    std::vector<double> centers;  // rad/s, strictly increasing, antisymmetric about the line center
    std::vector<double> weights;  // dimensionless, sum to 1
    double truncation_p = 0.0;    // total tail probability mass excluded

    std::size_t size() const { return centers.size(); }
};

// Inverse-CDF midpoint rule: u_j = p/2 + (1-p)(j-1/2)/M over j = 1..M, bin
// centers at the distribution quantiles of u_j, and uniform weights 1/M
// (the (1-p)/M tail-excluded weights renormalized to sum exactly 1).
// The excluded tail mass p shifts the effective coupling strength by ~p/2;
// convergence tests account for that bias. Centers are mirrored exactly so
// that centers[j] == -centers[M-1-j] holds bitwise for symmetric shapes.
SpinBins discretize(DistKind kind, double gamma_inh, std::size_t m,
                    double truncation_p, double center_offset = 0.0);

// Checks the structural invariants above; throws ValidationError on violation.
void validate(const SpinBins& bins);

}  // namespace cavmem
