#include "torcast/field.hpp"

#include <cmath>

#include "torcast/errors.hpp"

namespace torcast {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_kind(const ScalarField& f, FieldKind kind, const char* what) {
    if (f.kind != kind) {
        throw ArgumentError(std::string(what) + ": wrong field kind");
    }
}

}  // namespace

RegularGrid grid211(const LambertConfig& cfg) {
    RegularGrid g;
    g.origin = project(cfg, grid211_origin());
    g.dx = kGrid211SpacingMeters;
    g.dy = kGrid211SpacingMeters;
    g.nx = kGrid211Nx;
    g.ny = kGrid211Ny;
    g.crs = cfg;
    return g;
}

ScalarField kde_density(const ReportSet& reports, const RegularGrid& grid, double sigma_meters,
                        kernels::Variant variant) {
    if (!(sigma_meters > 0.0)) {
        throw ArgumentError("kde_density: sigma must be positive");
    }
    ScalarField f;
    f.grid = grid;
    f.kind = FieldKind::density;
    f.values.assign(grid.node_count(), 0.0);
    if (reports.reports.empty()) {
        return f;
    }

    std::vector<double> xs(grid.nx), ys(grid.ny), rx, ry;
    for (int i = 0; i < grid.nx; ++i) xs[i] = grid.node_x(i);
    for (int j = 0; j < grid.ny; ++j) ys[j] = grid.node_y(j);
    rx.reserve(reports.size());
    ry.reserve(reports.size());
    for (const Report& r : reports.reports) {
        rx.push_back(r.proj.x);
        ry.push_back(r.proj.y);
    }

    const double scale = 1.0 / (2.0 * kPi * sigma_meters * sigma_meters);
    const double neg_inv_two_sigma_sq = -1.0 / (2.0 * sigma_meters * sigma_meters);
    kernels::kde_accumulate(variant, f.values.data(), xs.data(), grid.nx, ys.data(), grid.ny,
                            rx.data(), ry.data(), rx.size(), neg_inv_two_sigma_sq, scale);
    return f;
}

ScalarField bilinear_refine(const ScalarField& f, int factor) {
    if (factor < 1) {
        throw ArgumentError("bilinear_refine: factor must be >= 1");
    }
    if (factor == 1) {
        return f;
    }
    const RegularGrid& in = f.grid;
    ScalarField out;
    out.grid = in;
    out.grid.dx = in.dx / factor;
    out.grid.dy = in.dy / factor;
    out.grid.nx = (in.nx - 1) * factor + 1;
    out.grid.ny = (in.ny - 1) * factor + 1;
    out.kind = f.kind;
    out.values.assign(out.grid.node_count(), 0.0);

    const double inv = 1.0 / factor;
    for (int jj = 0; jj < out.grid.ny; ++jj) {
        const int j = jj / factor;
        const int bq = jj - j * factor;
        const int j1 = bq == 0 ? j : j + 1;
        const double v = bq * inv;
        for (int ii = 0; ii < out.grid.nx; ++ii) {
            const int i = ii / factor;
            const int ap = ii - i * factor;
            const int i1 = ap == 0 ? i : i + 1;
            const double u = ap * inv;
            const double f00 = f.at(i, j);
            const double f10 = f.at(i1, j);
            const double f01 = f.at(i, j1);
            const double f11 = f.at(i1, j1);
            const double top = f00 + u * (f10 - f00);
            const double bot = f01 + u * (f11 - f01);
            out.values[static_cast<std::size_t>(jj) * out.grid.nx + ii] = top + v * (bot - top);
        }
    }
    return out;
}

ScalarField disk_integrate(const ScalarField& f, double radius_meters,
                           std::vector<std::string>* diagnostics, kernels::Variant variant) {
    require_kind(f, FieldKind::density, "disk_integrate");
    if (!(radius_meters > 0.0)) {
        throw ArgumentError("disk_integrate: radius must be positive");
    }
    const RegularGrid& g = f.grid;
    if (radius_meters < 0.5 * std::min(g.dx, g.dy) && diagnostics) {
        diagnostics->push_back("disk_integrate: radius " + std::to_string(radius_meters) +
                               " m is below half a cell; kernel degenerates to the center cell");
    }

    const int m = static_cast<int>(std::floor(radius_meters / g.dy));
    std::vector<int> half_width(2 * m + 1, -1);
    const double r2 = radius_meters * radius_meters;
    for (int dj = -m; dj <= m; ++dj) {
        const double rem = r2 - (dj * g.dy) * (dj * g.dy);
        if (rem >= 0.0) {
            half_width[dj + m] = static_cast<int>(std::floor(std::sqrt(rem) / g.dx));
        }
    }

    ScalarField lam;
    lam.grid = g;
    lam.kind = FieldKind::expected_count;
    lam.values.assign(g.node_count(), 0.0);
    kernels::disk_sum(variant, lam.values.data(), f.values.data(), g.nx, g.ny, half_width.data(),
                      m, g.cell_area());
    return lam;
}

ScalarField poisson_prob(const ScalarField& lam, kernels::Variant variant) {
    require_kind(lam, FieldKind::expected_count, "poisson_prob");
    for (double v : lam.values) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw DataError("poisson_prob: expected counts must be finite and non-negative");
        }
    }
    ScalarField p;
    p.grid = lam.grid;
    p.kind = FieldKind::probability;
    p.values.assign(lam.values.size(), 0.0);
    kernels::one_minus_exp_neg(variant, p.values.data(), lam.values.data(), lam.values.size());
    return p;
}

CategoricalField categorize(const ScalarField& p) {
    require_kind(p, FieldKind::probability, "categorize");
    CategoricalField cat;
    cat.grid = p.grid;
    cat.levels.resize(p.values.size());
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        cat.levels[i] = categorize_probability(p.values[i]);
    }
    return cat;
}

}  // namespace torcast
