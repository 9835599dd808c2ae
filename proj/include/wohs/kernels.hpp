/*
   Copyright 2026 The wohs Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "wohs/errors.hpp"
#include "wohs/numerics.hpp"

namespace wohs {

/// Index alpha in (0,2) and dimension d >= 1, with the derived constants cached.
class StableParams {
public:
    StableParams(double alpha, int d);

    double alpha() const { return alpha_; }
    int dim() const { return d_; }
    const StableConstants& constants() const { return constants_; }

private:
    double alpha_;
    int d_;
    StableConstants constants_;
};

enum class Direction { Down, Up };

/// Hyperplane {first coordinate = level}. Down is crossed from above.
struct Barrier {
    double level = 0.0;
    Direction direction = Direction::Down;
};

/// Faces of the slab (-1,1) x R^{d-1}: Plus is {x1 = 1}, crossed downward.
enum class SlabFace { Plus = 1, Minus = -1 };

inline Barrier barrier_of(SlabFace face)
{
    return face == SlabFace::Plus ? Barrier{1.0, Direction::Down} : Barrier{-1.0, Direction::Up};
}

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using PointXd = Point<double>;

/// Distance of a first coordinate from the barrier, positive on the side the
/// process starts from.
template <typename Scalar>
Scalar barrier_gap(Scalar v1, const Barrier& b)
{
    return b.direction == Direction::Down ? v1 - Scalar(b.level) : Scalar(b.level) - v1;
}

/// How far a lies beyond b in the pre-crossing direction. Formed from the raw
/// coordinates, so it stays exact when a and b are close but far from the barrier.
template <typename Scalar>
Scalar barrier_separation(Scalar a1, Scalar b1, const Barrier& b)
{
    return b.direction == Direction::Down ? a1 - b1 : b1 - a1;
}

namespace detail {

template <typename Derived>
void check_dim(const Eigen::MatrixBase<Derived>& v, const StableParams& p, const char* name)
{
    if (v.size() != p.dim()) {
        throw DomainError(std::string(name) + " has dimension " + std::to_string(v.size()) +
                          ", expected " + std::to_string(p.dim()));
    }
}

template <typename Scalar>
void check_start(Scalar gap, const char* name)
{
    if (!(gap > Scalar(0))) {
        throw DomainError(std::string(name) + " must lie strictly on the pre-crossing side");
    }
}

template <typename Scalar>
void check_off_barrier(Scalar gap, const char* name)
{
    if (gap == Scalar(0)) throw DomainError(std::string(name) + " lies on the barrier");
}

template <typename DA, typename DB>
typename DA::Scalar checked_distance(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                                     const char* what)
{
    const auto r = (a - b).norm();
    if (r == 0) throw DomainError(std::string("coincident points ") + what + " (density pole)");
    return r;
}

double incomplete_j_checked(double zeta, double alpha, int d);

} // namespace detail

/// Point of closest reach before the first passage below the barrier.
template <typename DX, typename DY>
typename DX::Scalar pcr_density(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y,
                                const StableParams& p, const Barrier& b = {})
{
    using S = typename DX::Scalar;
    using std::pow;
    detail::check_dim(x, p, "x");
    detail::check_dim(y, p, "y");
    const S gx = barrier_gap<S>(x(0), b);
    const S gy = barrier_gap<S>(y(0), b);
    detail::check_start(gx, "x");
    detail::check_off_barrier(gy, "y");
    const S r = detail::checked_distance(x, y, "x,y");
    if (gy < S(0) || gy >= gx) return S(0);
    const S a = S(p.alpha());
    return S(p.constants().C) * pow(barrier_separation<S>(x(0), y(0), b), a / 2) * pow(gy, -a / 2) *
           pow(r, -S(p.dim()));
}

/// Joint law of (closest reach, undershoot, overshoot) at the first passage.
template <typename DX, typename DW, typename DY, typename DZ>
typename DX::Scalar triple_density(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DW>& w,
                                   const Eigen::MatrixBase<DY>& y, const Eigen::MatrixBase<DZ>& z,
                                   const StableParams& p, const Barrier& b = {})
{
    using S = typename DX::Scalar;
    using std::pow;
    detail::check_dim(x, p, "x");
    detail::check_dim(w, p, "w");
    detail::check_dim(y, p, "y");
    detail::check_dim(z, p, "z");
    const S gx = barrier_gap<S>(x(0), b);
    const S gw = barrier_gap<S>(w(0), b);
    const S gy = barrier_gap<S>(y(0), b);
    const S gz = barrier_gap<S>(z(0), b);
    detail::check_start(gx, "x");
    detail::check_off_barrier(gw, "w");
    detail::check_off_barrier(gy, "y");
    detail::check_off_barrier(gz, "z");
    const S rxw = detail::checked_distance(x, w, "x,w");
    const S rwy = detail::checked_distance(w, y, "w,y");
    const S ryz = detail::checked_distance(y, z, "y,z");
    if (!(gw > S(0) && gw < gx && gy > gw && gz < S(0))) return S(0);
    const S a = S(p.alpha());
    const S d = S(p.dim());
    return S(p.constants().A) * pow(barrier_separation<S>(x(0), w(0), b), a / 2) * pow(rxw, -d) *
           pow(barrier_separation<S>(y(0), w(0), b), a / 2) * pow(rwy, -d) * pow(ryz, -a - d);
}

/// Zeta argument of the incomplete integral: 4 gap(x) gap(y) / |x-y|^2.
template <typename DX, typename DY>
typename DX::Scalar crossing_zeta(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y,
                                  const Barrier& b)
{
    using S = typename DX::Scalar;
    return S(4) * barrier_gap<S>(x(0), b) * barrier_gap<S>(y(0), b) / (x - y).squaredNorm();
}

/// Occupation density of the process killed at the first passage.
template <typename DX, typename DY>
typename DX::Scalar green_halfspace(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y,
                                    const StableParams& p, const Barrier& b = {})
{
    using S = typename DX::Scalar;
    using std::pow;
    detail::check_dim(x, p, "x");
    detail::check_dim(y, p, "y");
    const S gx = barrier_gap<S>(x(0), b);
    const S gy = barrier_gap<S>(y(0), b);
    detail::check_start(gx, "x");
    detail::check_off_barrier(gy, "y");
    const S r = detail::checked_distance(x, y, "x,y");
    if (gy < S(0)) return S(0);
    const S zeta = S(4) * gx * gy / (r * r);
    const S j = S(detail::incomplete_j_checked(static_cast<double>(zeta), p.alpha(), p.dim()));
    return S(p.constants().E) * pow(r, S(p.alpha()) - S(p.dim())) * j;
}

/// Levy jump density.
template <typename DV>
typename DV::Scalar jump_density(const Eigen::MatrixBase<DV>& v, const StableParams& p)
{
    using S = typename DV::Scalar;
    using std::pow;
    detail::check_dim(v, p, "v");
    const S r = v.norm();
    if (r == S(0)) throw DomainError("jump density is singular at the origin");
    return S(p.constants().K) * pow(r, -S(p.alpha()) - S(p.dim()));
}

/// Joint law of (undershoot, overshoot) at the first passage.
template <typename DX, typename DY, typename DZ>
typename DX::Scalar double_density(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y,
                                   const Eigen::MatrixBase<DZ>& z, const StableParams& p,
                                   const Barrier& b = {})
{
    using S = typename DX::Scalar;
    using std::pow;
    detail::check_dim(x, p, "x");
    detail::check_dim(y, p, "y");
    detail::check_dim(z, p, "z");
    const S gx = barrier_gap<S>(x(0), b);
    const S gy = barrier_gap<S>(y(0), b);
    const S gz = barrier_gap<S>(z(0), b);
    detail::check_start(gx, "x");
    detail::check_off_barrier(gy, "y");
    detail::check_off_barrier(gz, "z");
    const S rxy = detail::checked_distance(x, y, "x,y");
    const S ryz = detail::checked_distance(y, z, "y,z");
    if (!(gy > S(0) && gz < S(0))) return S(0);
    const S a = S(p.alpha());
    const S d = S(p.dim());
    const S zeta = S(4) * gx * gy / (rxy * rxy);
    const S j = S(detail::incomplete_j_checked(static_cast<double>(zeta), p.alpha(), p.dim()));
    return S(p.constants().B) * pow(rxy, a - d) * j * pow(ryz, -a - d);
}

/// Position right after the first passage.
template <typename DX, typename DZ>
typename DX::Scalar overshoot_density(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DZ>& z,
                                      const StableParams& p, const Barrier& b = {})
{
    using S = typename DX::Scalar;
    using std::pow;
    detail::check_dim(x, p, "x");
    detail::check_dim(z, p, "z");
    const S gx = barrier_gap<S>(x(0), b);
    const S gz = barrier_gap<S>(z(0), b);
    detail::check_start(gx, "x");
    detail::check_off_barrier(gz, "z");
    if (gz > S(0)) return S(0);
    const S a = S(p.alpha());
    return S(p.constants().C) * pow((x - z).norm(), -S(p.dim())) * pow(gx, a / 2) *
           pow(-gz, -a / 2);
}

/// Overshoot across a slab face under the measure conditioned to absorb at
/// the origin (alpha < 1). The weight |y1|^(alpha-1) is always centred at 0.
template <typename DX, typename DY>
typename DX::Scalar overshoot_density_conditioned(const Eigen::MatrixBase<DX>& x,
                                                  const Eigen::MatrixBase<DY>& y, SlabFace face,
                                                  const StableParams& p)
{
    using S = typename DX::Scalar;
    using std::abs;
    using std::pow;
    if (!(p.alpha() < 1.0)) {
        throw DomainError("the conditioned overshoot law needs alpha in (0,1)");
    }
    const S plain = overshoot_density(x, y, p, barrier_of(face));
    if (y(0) == S(0)) throw DomainError("conditioned density is singular at y1 = 0");
    if (plain == S(0)) return plain;
    const S e = S(p.alpha()) - S(1);
    return plain * pow(abs(y(0)), e) / pow(abs(x(0)), e);
}

/// (p)-dimensional Cauchy density with scale gamma, p = t.size().
template <typename DT>
typename DT::Scalar cauchy_density(const Eigen::MatrixBase<DT>& t, typename DT::Scalar gamma)
{
    using S = typename DT::Scalar;
    using std::pow;
    if (!(gamma > S(0))) throw DomainError("Cauchy scale must be positive");
    if (t.size() < 1) throw DomainError("Cauchy dimension must be at least 1");
    const double half = 0.5 * static_cast<double>(t.size() + 1);
    const S norm = S(std::tgamma(half) / std::pow(3.14159265358979323846, half));
    return norm * gamma * pow(gamma * gamma + t.squaredNorm(), -S(half));
}

/// Renewal density of the ascending ladder process, at z above x.
template <typename DX, typename DZ>
typename DX::Scalar ascending_ladder_potential(const Eigen::MatrixBase<DX>& x,
                                               const Eigen::MatrixBase<DZ>& z, const StableParams& p)
{
    using S = typename DX::Scalar;
    using std::pow;
    detail::check_dim(x, p, "x");
    detail::check_dim(z, p, "z");
    if (!(z(0) > x(0))) throw DomainError("ascending potential needs z1 > x1");
    const double half_d = 0.5 * p.dim();
    const S k = S(std::tgamma(half_d) /
                  (std::pow(3.14159265358979323846, half_d) * std::tgamma(0.5 * p.alpha())));
    return k * pow(z(0) - x(0), S(p.alpha()) / 2) * pow((x - z).norm(), -S(p.dim()));
}

/// One-dimensional descending ladder height renewal density at v below y1.
double descending_renewal_density(double y1, double v, double alpha);

/// First-entry density into the ball B(center, radius) from x outside it.
template <typename DX, typename DY, typename DC>
typename DX::Scalar ball_hitting_density(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y,
                                         const Eigen::MatrixBase<DC>& center,
                                         typename DX::Scalar radius, const StableParams& p)
{
    using S = typename DX::Scalar;
    using std::abs;
    using std::pow;
    detail::check_dim(x, p, "x");
    detail::check_dim(y, p, "y");
    detail::check_dim(center, p, "center");
    if (!(radius > S(0))) throw DomainError("ball radius must be positive");
    // |v - c|^2 - R^2 expanded so that a huge, nearly tangent ball keeps precision.
    const S c_norm = center.norm();
    const S c_term = (c_norm - radius) * (c_norm + radius);
    const S sx = x.squaredNorm() - S(2) * x.dot(center) + c_term;
    const S sy = y.squaredNorm() - S(2) * y.dot(center) + c_term;
    if (!(sx > S(0))) throw DomainError("x must lie strictly outside the ball");
    if (!(sy < S(0))) throw DomainError("y must lie strictly inside the ball");
    const S a = S(p.alpha());
    return S(p.constants().C) * pow(sx / -sy, a / 2) * pow((x - y).norm(), -S(p.dim()));
}

} // namespace wohs
