#include "groundstate/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "groundstate/errors.hpp"

namespace groundstate {

double surface_area(int d) {
    using std::numbers::pi;
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * pi;
        case 3: return 4.0 * pi;
        case 4: return 2.0 * pi * pi;
        case 5: return 8.0 * pi * pi / 3.0;
        default: break;
    }
    if (d < 1) throw DomainError("surface_area: dimension must be >= 1");
    const double half = 0.5 * d;
    return 2.0 * std::pow(pi, half) / std::tgamma(half);
}

StaggeredGrid StaggeredGrid::build(double R, int M, int d) {
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw InvalidConfiguration("grid radius must be positive and finite, got " + std::to_string(R));
    }
    if (M < 4) throw InvalidConfiguration("grid needs at least 4 unknowns, got " + std::to_string(M));
    if (d < 1) throw InvalidConfiguration("dimension must be >= 1, got " + std::to_string(d));

    auto data = std::make_shared<Data>();
    data->R = R;
    data->M = M;
    data->d = d;
    data->h = 2.0 * R / (2.0 * M + 1.0);
    const double h = data->h;
    const double c = surface_area(d);
    const int e = d - 1;

    data->nodes.resize(M);
    data->weights.resize(M);
    data->upper.resize(M);
    data->lower.resize(M);
    for (int j = 0; j < M; ++j) {
        const double r = (j + 0.5) * h;
        const double w_mid = std::pow(r, e);
        const double w_up = std::pow((j + 1) * h, e);
        // Row 0 has no lower coupling: r_0^{d-1} = 0 for d > 1, and for d = 1 the
        // Neumann ghost v_{-1/2} = v_{1/2} cancels the term.
        const double w_lo = (j == 0) ? 0.0 : std::pow(j * h, e);
        data->nodes[j] = r;
        data->weights[j] = c * h * w_mid;
        data->upper[j] = w_up / (h * h * w_mid);
        data->lower[j] = w_lo / (h * h * w_mid);
    }
    return StaggeredGrid(std::move(data));
}

StaggeredGrid StaggeredGrid::scaled(double factor) const {
    if (factor == 1.0) return *this;
    return build(data_->R * factor, data_->M, data_->d);
}

RadialProfile::RadialProfile(StaggeredGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != static_cast<std::size_t>(grid_.size())) {
        throw DimensionMismatch("profile has " + std::to_string(values_.size()) +
                                " samples, grid expects " + std::to_string(grid_.size()));
    }
    for (double x : values_) {
        if (!std::isfinite(x)) throw InvalidConfiguration("profile sample is not finite");
    }
}

RadialProfile RadialProfile::zeros(const StaggeredGrid& grid) {
    return RadialProfile(grid, std::vector<double>(grid.size(), 0.0));
}

RadialProfile RadialProfile::sample(const StaggeredGrid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (int j = 0; j < grid.size(); ++j) v[j] = f(grid.node(j));
    return RadialProfile(grid, std::move(v));
}

void TridiagonalOperator::apply(std::span<const double> x, std::span<double> out) const {
    const std::size_t n = diag.size();
    if (x.size() != n || out.size() != n || sub.size() + 1 != n || super.size() + 1 != n) {
        throw DimensionMismatch("tridiagonal apply: inconsistent sizes");
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += sub[i - 1] * x[i - 1];
        if (i + 1 < n) s += super[i] * x[i + 1];
        out[i] = s;
    }
}

std::vector<double> TridiagonalOperator::apply(std::span<const double> x) const {
    std::vector<double> out(diag.size());
    apply(x, out);
    return out;
}

RadialProfile TridiagonalOperator::apply(const RadialProfile& v) const {
    return RadialProfile(v.grid(), apply(v.values()));
}

TridiagonalLU::TridiagonalLU(const TridiagonalOperator& a) {
    const std::size_t n = a.diag.size();
    if (n == 0 || a.sub.size() + 1 != n || a.super.size() + 1 != n) {
        throw DimensionMismatch("tridiagonal factor: inconsistent sizes");
    }
    sub_ = a.sub;
    pivot_inv_.resize(n);
    super_scaled_.resize(n - 1);
    double scale = 0.0;
    for (double x : a.diag) scale = std::max(scale, std::abs(x));
    const double tiny = std::max(scale, 1.0) * 1e-300;

    double pivot = a.diag[0];
    for (std::size_t i = 0;; ++i) {
        if (!(std::abs(pivot) > tiny) || !std::isfinite(pivot)) {
            throw SingularSystem("zero pivot at row " + std::to_string(i));
        }
        pivot_inv_[i] = 1.0 / pivot;
        if (i + 1 == n) break;
        super_scaled_[i] = a.super[i] * pivot_inv_[i];
        pivot = a.diag[i + 1] - a.sub[i] * super_scaled_[i];
    }
}

void TridiagonalLU::solve(std::span<const double> rhs, std::span<double> x) const {
    const std::size_t n = pivot_inv_.size();
    if (rhs.size() != n || x.size() != n) throw DimensionMismatch("tridiagonal solve: size mismatch");
    x[0] = rhs[0] * pivot_inv_[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = (rhs[i] - sub_[i - 1] * x[i - 1]) * pivot_inv_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= super_scaled_[i] * x[i + 1];
}

std::vector<double> TridiagonalLU::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.size());
    solve(rhs, x);
    return x;
}

void apply_laplacian(const StaggeredGrid& grid, std::span<const double> v, std::span<double> out) {
    const int m = grid.size();
    if (static_cast<int>(v.size()) != m || static_cast<int>(out.size()) != m) {
        throw DimensionMismatch("laplacian: profile size does not match grid");
    }
    const auto up = grid.upper_coupling();
    const auto lo = grid.lower_coupling();
    for (int j = 0; j < m; ++j) {
        const double right = (j + 1 < m) ? v[j + 1] : 0.0;
        const double left = (j > 0) ? v[j - 1] : v[0];
        out[j] = up[j] * (right - v[j]) - lo[j] * (v[j] - left);
    }
}

RadialProfile apply_laplacian(const RadialProfile& v) {
    std::vector<double> out(v.size());
    apply_laplacian(v.grid(), v.values(), out);
    return RadialProfile(v.grid(), std::move(out));
}

TridiagonalOperator assemble_operator(const StaggeredGrid& grid, double shift,
                                      std::span<const double> potential) {
    const int m = grid.size();
    if (static_cast<int>(potential.size()) != m) {
        throw DimensionMismatch("assemble_operator: potential size does not match grid");
    }
    if (!(shift >= 0.0)) throw InvalidConfiguration("assemble_operator: shift must be >= 0");
    const auto up = grid.upper_coupling();
    const auto lo = grid.lower_coupling();
    TridiagonalOperator a;
    a.diag.resize(m);
    a.sub.resize(m - 1);
    a.super.resize(m - 1);
    for (int j = 0; j < m; ++j) {
        a.diag[j] = shift + up[j] + lo[j] + potential[j];
        if (j + 1 < m) a.super[j] = -up[j];
        if (j > 0) a.sub[j - 1] = -lo[j];
    }
    return a;
}

TridiagonalOperator assemble_operator(const StaggeredGrid& grid, double shift, double potential) {
    std::vector<double> p(grid.size(), potential);
    return assemble_operator(grid, shift, p);
}

TridiagonalOperator assemble_operator(const StaggeredGrid& grid, double shift,
                                      const RadialProfile& potential) {
    if (!(potential.grid() == grid)) throw DimensionMismatch("assemble_operator: grid mismatch");
    return assemble_operator(grid, shift, potential.values());
}

RadialProfile solve_tridiagonal(const TridiagonalOperator& a, const RadialProfile& rhs) {
    if (a.size() != rhs.size()) throw DimensionMismatch("solve_tridiagonal: size mismatch");
    const TridiagonalLU lu(a);
    std::vector<double> x = lu.solve(rhs.values());

    double anorm = 0.0;
    double bnorm = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row = std::abs(a.diag[i]);
        if (i > 0) row += std::abs(a.sub[i - 1]);
        if (i + 1 < a.size()) row += std::abs(a.super[i]);
        anorm = std::max(anorm, row);
        bnorm = std::max(bnorm, std::abs(rhs[i]));
    }
    // Normwise backward error ||A x - b|| / (||A|| ||x|| + ||b||), one refinement step allowed.
    double eta = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        const std::vector<double> ax = a.apply(x);
        std::vector<double> r(ax.size());
        double res = 0.0;
        double xnorm = 0.0;
        for (std::size_t i = 0; i < ax.size(); ++i) {
            r[i] = rhs[i] - ax[i];
            res = std::max(res, std::abs(r[i]));
            xnorm = std::max(xnorm, std::abs(x[i]));
        }
        const double scale = anorm * xnorm + bnorm;
        eta = scale > 0.0 ? res / scale : 0.0;
        if (eta <= 1e-12) return RadialProfile(rhs.grid(), std::move(x));
        if (pass == 0) {
            const std::vector<double> dx = lu.solve(r);
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "solve_tridiagonal: backward error %.3e exceeds 1e-12 (system is near singular)", eta);
    throw SingularSystem(buf);
}

double power_integral(const StaggeredGrid& grid, std::span<const double> v, double p) {
    const auto w = grid.weights();
    double s = 0.0;
    if (p == 2.0) {
        for (std::size_t j = 0; j < v.size(); ++j) s += w[j] * v[j] * v[j];
    } else {
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] != 0.0) s += w[j] * std::pow(std::abs(v[j]), p);
        }
    }
    return s;
}

double lp_norm(const StaggeredGrid& grid, std::span<const double> v, double p) {
    if (static_cast<int>(v.size()) != grid.size()) throw DimensionMismatch("lp_norm: size mismatch");
    if (p == kInfinity) {
        double m = std::abs(center_value(v));
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    if (!(p >= 1.0)) throw InvalidConfiguration("lp_norm: exponent must be >= 1");
    const double s = power_integral(grid, v, p);
    return s == 0.0 ? 0.0 : std::pow(s, 1.0 / p);
}

double lp_norm(const RadialProfile& v, double p) { return lp_norm(v.grid(), v.values(), p); }

double inner_product(const StaggeredGrid& grid, std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size() || static_cast<int>(u.size()) != grid.size()) {
        throw DimensionMismatch("inner_product: size mismatch");
    }
    const auto w = grid.weights();
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += w[j] * u[j] * v[j];
    return s;
}

double inner_product(const RadialProfile& u, const RadialProfile& v) {
    if (!(u.grid() == v.grid())) throw DimensionMismatch("inner_product: profiles live on different grids");
    return inner_product(u.grid(), u.values(), v.values());
}

double dirichlet_form(const StaggeredGrid& grid, std::span<const double> v) {
    const int m = grid.size();
    if (static_cast<int>(v.size()) != m) throw DimensionMismatch("dirichlet_form: size mismatch");
    // -<Delta v, v> = C(d)/h * sum_{j=1..M} r_j^{d-1} (v_{j+1/2} - v_{j-1/2})^2, v_{M+1/2} = 0.
    // weights[j] * upper[j] = C(d) r_{j+1}^{d-1} / h.
    const auto w = grid.weights();
    const auto up = grid.upper_coupling();
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
        const double next = (j + 1 < m) ? v[j + 1] : 0.0;
        const double diff = next - v[j];
        s += w[j] * up[j] * diff * diff;
    }
    return s;
}

double dirichlet_form(const RadialProfile& v) { return dirichlet_form(v.grid(), v.values()); }

double center_value(std::span<const double> v) {
    if (v.size() < 2) throw InvalidConfiguration("center_value needs at least two samples");
    return (9.0 * v[0] - v[1]) / 8.0;
}

double center_value(const RadialProfile& v) { return center_value(v.values()); }

std::optional<double> first_sign_change(const RadialProfile& u, const RadialProfile& v) {
    if (!(u.grid() == v.grid())) throw DimensionMismatch("first_sign_change: grid mismatch");
    const auto& g = u.grid();
    double prev = u[0] - v[0];
    for (int j = 1; j < g.size(); ++j) {
        const double cur = u[j] - v[j];
        if (prev == 0.0 && cur == 0.0) continue;
        if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) {
            const double t = prev / (prev - cur);
            return g.node(j - 1) + t * g.h();
        }
        prev = cur;
    }
    return std::nullopt;
}

ProfileInterpolant::ProfileInterpolant(const RadialProfile& v)
    : h_(v.grid().h()), radius_(v.grid().radius()) {
    const int m = v.grid().size();
    // Even reflection through r = 0 plus the Dirichlet node at R.
    x_.reserve(m + 3);
    y_.reserve(m + 3);
    x_.push_back(-1.5 * h_);
    y_.push_back(v[1]);
    x_.push_back(-0.5 * h_);
    y_.push_back(v[0]);
    for (int j = 0; j < m; ++j) {
        x_.push_back(v.grid().node(j));
        y_.push_back(v[j]);
    }
    x_.push_back(radius_);
    y_.push_back(0.0);

    const std::size_t n = x_.size();
    std::vector<double> delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
    slope_.assign(n, 0.0);
    slope_[0] = delta[0];
    slope_[n - 1] = delta[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double a = delta[k - 1];
        const double b = delta[k];
        if (a * b <= 0.0) {
            slope_[k] = 0.0;
        } else {
            // Uniform spacing: Fritsch-Carlson weighted harmonic mean reduces to 2ab/(a+b).
            slope_[k] = 2.0 * a * b / (a + b);
        }
    }
}

double ProfileInterpolant::operator()(double r) const {
    r = std::abs(r);
    if (r >= radius_) return 0.0;
    std::size_t k = static_cast<std::size_t>((r - x_[0]) / h_);
    k = std::min(k, x_.size() - 2);
    const double dx = x_[k + 1] - x_[k];
    const double t = (r - x_[k]) / dx;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[k] + h10 * dx * slope_[k] + h01 * y_[k + 1] + h11 * dx * slope_[k + 1];
}

}  // namespace groundstate
