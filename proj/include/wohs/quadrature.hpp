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

#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace wohs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Integration interval with declared endpoint behaviour.
///
/// For a finite endpoint the exponent e (> -1) says the integrand behaves
/// like |u - endpoint|^e there; the substitution u = t^(1/(1+e)) removes it.
/// For an infinite endpoint the exponent p (< -1) is the tail power,
/// f(u) ~ |u|^p; the map u = L t/(1-t) (L = tail_scale) followed by the
/// matching power substitution handles it. Exponent 0 means "regular" for a
/// finite end and defaults to p = -2 for an infinite one.
struct QuadSpec {
    double lower = 0.0;
    double upper = 1.0;
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::optional<std::pair<double, double>> singularity_exponents;
    double tail_scale = 1.0;
    int max_panels = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

using RealFn = std::function<double(double)>;

/// One piece of an integration interval mapped monotonically onto t in
/// [0,1] so that the transformed integrand g(t) = f(u(t)) u'(t) is smooth.
class MappedSegment {
public:
    enum class Kind { Finite, LowerTail, UpperTail };

    /// Finite [a,b]; the power map is applied at the end carrying a nonzero
    /// exponent (at most one of the two may be nonzero).
    static MappedSegment finite(double a, double b, double lower_exp, double upper_exp);
    /// (-inf, b] with tail power p.
    static MappedSegment lower_tail(double b, double tail_power, double scale);
    /// [a, +inf) with tail power p.
    static MappedSegment upper_tail(double a, double tail_power, double scale);

    /// u(t) and du/dt at t. Returns false when u rounds onto an excluded
    /// endpoint (the contribution is then dropped).
    bool map(double t, double& u, double& jacobian) const;
    /// t(u), the inverse map, for u inside the segment.
    double inverse(double u) const;

    double lower() const;
    double upper() const;
    bool contains(double u) const { return u >= lower() && u <= upper(); }

private:
    Kind kind_ = Kind::Finite;
    double a_ = 0.0;
    double b_ = 1.0;
    double q_ = 1.0;
    bool power_at_lower_ = true;
    double scale_ = 1.0;
};

/// Split a QuadSpec into mapped segments, each with at most one special end.
std::vector<MappedSegment> decompose(const QuadSpec& spec);

/// Adaptive Gauss-Kronrod (21-point) integration over the segments of spec.
/// Throws ConvergenceError carrying the best estimate and error bound if the
/// panel budget runs out before max(abs_tol, rel_tol*|value|) is met.
QuadResult integrate(const RealFn& f, const QuadSpec& spec);

/// Value-only convenience wrapper over integrate().
double adaptive_quad(const RealFn& f, const QuadSpec& spec);

/// Integrate over consecutive pieces (e.g. split at an interior
/// singularity); tolerances are taken from each piece.
QuadResult integrate_pieces(const RealFn& f, const std::vector<QuadSpec>& pieces);

namespace detail {

struct GkPanel {
    double value;
    double error;
};

/// One 21-point Gauss-Kronrod panel of g over [lo, hi].
GkPanel gauss_kronrod21(const RealFn& g, double lo, double hi);

} // namespace detail

} // namespace wohs
