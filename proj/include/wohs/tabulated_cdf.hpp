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

#include <vector>

#include "wohs/quadrature.hpp"

namespace wohs {

/// One piece of a piecewise-defined density. The density is given in a local
/// coordinate u over spec's range and y = origin + u (or origin - u when
/// reflected). Putting a singular end at u = 0 keeps full relative precision
/// there, which y itself cannot offer next to a nonzero endpoint.
struct CdfPiece {
    RealFn pdf;
    QuadSpec spec;
    double origin = 0.0;
    bool reflected = false;
};

class TabulatedCdf {
public:
    /// Pieces must be listed in increasing y and be contiguous.
    explicit TabulatedCdf(const std::vector<CdfPiece>& pieces, int knots = 512);
    TabulatedCdf(const RealFn& pdf, const std::vector<QuadSpec>& pieces, int knots = 512);

    double cdf(double y) const;
    double quantile(double u) const;

    /// Integral of the unnormalised density over the support.
    double total_mass() const { return total_; }
    double support_lower() const;
    double support_upper() const;

    /// Knot abscissae (in y) and normalised CDF values at them, increasing.
    std::vector<double> knots() const;
    std::vector<double> cdf_values() const;

private:
    struct Segment {
        MappedSegment map;
        std::size_t pdf = 0;       // index into pdfs_
        double origin = 0.0;
        bool reflected = false;
        std::vector<double> t;    // knots in [0,1]
        std::vector<double> mass; // cumulative unnormalised mass at knots, in u order
        std::vector<double> dens; // transformed density at knots
        double offset = 0.0;      // mass of all segments below in y
    };

    double to_y(const Segment& s, double u) const;
    double to_u(const Segment& s, double y) const;
    double y_lower(const Segment& s) const;
    double y_upper(const Segment& s) const;
    double transformed(const Segment& s, double t) const;
    double local_mass(const Segment& s, std::size_t k, double t) const;
    double solve_u_mass(const Segment& s, double want) const;
    void build_segment(Segment& s, int knots);

    std::vector<RealFn> pdfs_;
    std::vector<Segment> segments_;
    double total_ = 0.0;
};

TabulatedCdf build_inverse_cdf(const RealFn& pdf_unnormalized, const QuadSpec& spec);
TabulatedCdf build_inverse_cdf(const RealFn& pdf_unnormalized, const std::vector<QuadSpec>& pieces);
TabulatedCdf build_inverse_cdf(const std::vector<CdfPiece>& pieces);

} // namespace wohs
