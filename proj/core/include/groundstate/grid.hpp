#pragma once

// Staggered radial grid, the discrete radial Laplacian, discrete L^p_r
// quadrature and the tridiagonal machinery shared by the flows and the
// spectral diagnostics.

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace groundstate {

/// Surface area of the unit sphere in R^d: 2 pi^{d/2} / Gamma(d/2).
/// Table values are returned verbatim for d = 1..5.
double surface_area(int d);

/// Truncated radial mesh on [0, R] with unknowns on the staggered nodes
/// r_{j+1/2} = (j + 1/2) h, j = 0..M-1, and h = 2R / (2M + 1), so that the
/// node r_{M+1/2} sits exactly on the Dirichlet boundary.
///
/// Cheap to copy: the precomputed node tables are shared and immutable.
class StaggeredGrid {
public:
    /// Throws InvalidConfiguration unless R > 0, M >= 4 and d >= 1.
    static StaggeredGrid build(double R, int M, int d);

    double radius() const noexcept { return data_->R; }
    int size() const noexcept { return data_->M; }
    int dimension() const noexcept { return data_->d; }
    double h() const noexcept { return data_->h; }

    /// Staggered node r_{j+1/2}.
    double node(int j) const noexcept { return (j + 0.5) * data_->h; }
    /// Regular node r_j.
    double regular_node(int j) const noexcept { return j * data_->h; }

    std::span<const double> nodes() const noexcept { return data_->nodes; }
    /// Midpoint quadrature weights C(d) h r_{j+1/2}^{d-1}.
    std::span<const double> weights() const noexcept { return data_->weights; }
    /// r_{j+1}^{d-1} / (h^2 r_{j+1/2}^{d-1}): coupling of node j to j+1.
    std::span<const double> upper_coupling() const noexcept { return data_->upper; }
    /// r_j^{d-1} / (h^2 r_{j+1/2}^{d-1}): coupling of node j to j-1.
    std::span<const double> lower_coupling() const noexcept { return data_->lower; }

    /// Same M and d, radius multiplied by `factor` (h scales accordingly).
    StaggeredGrid scaled(double factor) const;

    friend bool operator==(const StaggeredGrid& a, const StaggeredGrid& b) noexcept {
        return a.data_ == b.data_ ||
               (a.data_->M == b.data_->M && a.data_->d == b.data_->d && a.data_->R == b.data_->R);
    }

private:
    struct Data {
        double R;
        int M;
        int d;
        double h;
        std::vector<double> nodes;
        std::vector<double> weights;
        std::vector<double> upper;
        std::vector<double> lower;
    };
    explicit StaggeredGrid(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

    std::shared_ptr<const Data> data_;
};

inline StaggeredGrid build_grid(double R, int M, int d) { return StaggeredGrid::build(R, M, d); }

/// Samples v_{j+1/2}, j = 0..M-1, on a staggered grid. Ghost rules are
/// implicit: v_{-1/2} = v_{1/2} and v_{M+1/2} = 0.
class RadialProfile {
public:
    /// Throws DimensionMismatch on a size mismatch and InvalidConfiguration on
    /// non-finite samples.
    RadialProfile(StaggeredGrid grid, std::vector<double> values);

    static RadialProfile zeros(const StaggeredGrid& grid);
    static RadialProfile sample(const StaggeredGrid& grid, const std::function<double(double)>& f);

    const StaggeredGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t j) const noexcept { return values_[j]; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Moves the samples out (leaves the profile empty).
    std::vector<double> release() && { return std::move(values_); }

private:
    StaggeredGrid grid_;
    std::vector<double> values_;
};

/// Three-diagonal matrix acting on profile samples.
/// sub[j] couples row j+1 to column j, super[j] couples row j to column j+1.
struct TridiagonalOperator {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;

    std::size_t size() const noexcept { return diag.size(); }
    void apply(std::span<const double> x, std::span<double> out) const;
    std::vector<double> apply(std::span<const double> x) const;
    RadialProfile apply(const RadialProfile& v) const;
};

/// LU factors of a tridiagonal matrix (Thomas elimination without pivoting).
class TridiagonalLU {
public:
    /// Throws SingularSystem on a zero (or vanishing) pivot.
    explicit TridiagonalLU(const TridiagonalOperator& a);

    void solve(std::span<const double> rhs, std::span<double> x) const;
    std::vector<double> solve(std::span<const double> rhs) const;

private:
    std::vector<double> sub_;
    std::vector<double> pivot_inv_;
    std::vector<double> super_scaled_;
};

/// Low-level stencil on raw samples: out = Delta_r^h v.
void apply_laplacian(const StaggeredGrid& grid, std::span<const double> v, std::span<double> out);
RadialProfile apply_laplacian(const RadialProfile& v);

/// Matrix of shift * I - Delta_r^h + diag(potential).
TridiagonalOperator assemble_operator(const StaggeredGrid& grid, double shift,
                                      std::span<const double> potential);
TridiagonalOperator assemble_operator(const StaggeredGrid& grid, double shift, double potential);
TridiagonalOperator assemble_operator(const StaggeredGrid& grid, double shift,
                                      const RadialProfile& potential);

/// Direct solve with a residual check ||A x - rhs||_inf <= 1e-12 ||rhs||_inf.
RadialProfile solve_tridiagonal(const TridiagonalOperator& a, const RadialProfile& rhs);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Discrete L^p_r norm (midpoint rule). p = kInfinity gives
/// max(|center value|, max |samples|).
double lp_norm(const RadialProfile& v, double p);
double lp_norm(const StaggeredGrid& grid, std::span<const double> v, double p);

/// sum_j C(d) h r^{d-1} |v_j|^p without the 1/p root.
double power_integral(const StaggeredGrid& grid, std::span<const double> v, double p);

double inner_product(const RadialProfile& u, const RadialProfile& v);
double inner_product(const StaggeredGrid& grid, std::span<const double> u, std::span<const double> v);

/// Discrete Dirichlet form ||v'||^2_{L^2_r} = -<Delta_r^h v, v>, written as a
/// sum of squared differences over the regular nodes.
double dirichlet_form(const StaggeredGrid& grid, std::span<const double> v);
double dirichlet_form(const RadialProfile& v);

/// u(0) from the even parabola through the two innermost samples.
double center_value(std::span<const double> v);
double center_value(const RadialProfile& v);

/// Smallest radius where u - v changes sign (linear interpolation between
/// adjacent staggered nodes), or nullopt.
std::optional<double> first_sign_change(const RadialProfile& u, const RadialProfile& v);

/// Monotone (Fritsch-Carlson) cubic through the samples, extended evenly
/// across r = 0 and pinned to zero at r = R. Evaluates to 0 for r >= R.
class ProfileInterpolant {
public:
    explicit ProfileInterpolant(const RadialProfile& v);

    double operator()(double r) const;

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;
    double h_;
    double radius_;
};

}  // namespace groundstate
