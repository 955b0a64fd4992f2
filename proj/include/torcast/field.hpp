#pragma once

#include <string>
#include <vector>

#include "torcast/grid.hpp"
#include "torcast/kernels.hpp"

namespace torcast {

/// Gaussian kernel density of the report set on the grid:
///   f(x,y) = sum_n 1/(2 pi sigma^2) * exp(-d_n^2 / (2 sigma^2))
/// with d_n the Euclidean projected distance to report n. Full summation
/// over all reports (including ones outside the grid extent); an empty
/// window yields the zero field. Values are per square meter.
ScalarField kde_density(const ReportSet& reports, const RegularGrid& grid, double sigma_meters,
                        kernels::Variant variant = kernels::active_variant());

/// Bilinear refinement of a node-centered field. The output grid spans the
/// same extent with spacing divided by `factor`; coarse nodes coincide with
/// every factor-th fine node and are preserved exactly.
ScalarField bilinear_refine(const ScalarField& f, int factor);

/// Integrates density over a disk of the given radius around every node:
///   lambda(x,y) = cell_area * sum of f over cells whose centers lie within
///   radius of (x,y).
/// Cell membership is by center distance; cells beyond the grid edge
/// contribute nothing. A radius below half a cell degenerates to the center
/// cell and is reported through `diagnostics` when provided.
ScalarField disk_integrate(const ScalarField& f, double radius_meters,
                           std::vector<std::string>* diagnostics = nullptr,
                           kernels::Variant variant = kernels::active_variant());

/// P = 1 - exp(-lambda), elementwise. Throws DataError on negative lambda.
ScalarField poisson_prob(const ScalarField& lam,
                         kernels::Variant variant = kernels::active_variant());

/// Thresholds a probability field into categorical risk levels.
CategoricalField categorize(const ScalarField& p);

}  // namespace torcast
