// SPDX-License-Identifier: Apache-2.0
//
// ehbc: scheduling for energy-harvesting MIMO broadcast transmitters
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ehbc/errors.hpp"
#include "ehbc/offline.hpp"

namespace ehbc {

namespace {

struct Point {
    double s; // super-capacitor level
    double b; // battery level, drainable joules
};

double cross(const Point& o, const Point& a, const Point& b)
{
    return (a.s - o.s) * (b.b - o.b) - (a.b - o.b) * (b.s - o.s);
}

// Andrew's monotone chain; collinear points are dropped.
std::vector<Point> convex_hull(std::vector<Point> pts)
{
    std::sort(pts.begin(), pts.end(), [](const Point& x, const Point& y) { return x.s < y.s || (x.s == y.s && x.b < y.b); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](const Point& x, const Point& y) { return x.s == y.s && x.b == y.b; }),
              pts.end());
    if (pts.size() < 3)
        return pts;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0)
            --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

std::vector<Point> minkowski_segment(const std::vector<Point>& poly, Point u, Point v)
{
    std::vector<Point> pts;
    pts.reserve(2 * poly.size());
    for (const auto& p : poly) {
        pts.push_back({p.s + u.s, p.b + u.b});
        pts.push_back({p.s + v.s, p.b + v.b});
    }
    return convex_hull(std::move(pts));
}

// Sutherland-Hodgman against a s + c b <= bound.
std::vector<Point> clip(const std::vector<Point>& poly, double a, double c, double bound, double slop)
{
    if (poly.empty())
        return {};
    auto f = [&](const Point& p) { return a * p.s + c * p.b - bound; };
    if (poly.size() == 1)
        return f(poly[0]) <= slop ? poly : std::vector<Point>{};
    std::vector<Point> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % poly.size()];
        const double fp = f(p), fq = f(q);
        if (fp <= slop)
            out.push_back(p);
        if ((fp <= slop) != (fq <= slop)) {
            const double t = fp / (fp - fq);
            out.push_back({p.s + t * (q.s - p.s), p.b + t * (q.b - p.b)});
        }
    }
    return convex_hull(std::move(out));
}

double max_total(const std::vector<Point>& poly)
{
    double m = 0;
    for (const auto& p : poly)
        m = std::max(m, p.s + p.b);
    return m;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, int iterations)
{
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
    double fa = f(a), fb = f(b);
    for (int it = 0; it < iterations; ++it) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        }
    }
    return std::max({fa, fb, f(lo), f(hi)});
}

struct BruteEpoch {
    std::vector<std::pair<double, double>> modes; // (weight, gain)
    double length, circuit, peak;

    double rate(double p) const
    {
        if (p <= 0)
            return 0;
        if (modes.size() == 1)
            return modes[0].first * std::log1p(modes[0].second * p);
        auto split = [&](double a) {
            return modes[0].first * std::log1p(modes[0].second * a) +
                   modes[1].first * std::log1p(modes[1].second * (p - a));
        };
        return golden_max(split, 0.0, p, 60);
    }

    double value(double d) const
    {
        if (d <= 0)
            return 0;
        if (circuit <= 0)
            return length * rate(std::min(peak, d / length));
        const double t_peak = d / (peak + circuit);
        if (t_peak >= length)
            return length * rate(peak);
        const double t_max = std::min(length, d / circuit);
        auto h = [&](double tau) { return tau * rate(std::max(0.0, d / tau - circuit)); };
        return golden_max(h, t_peak, t_max, 70);
    }
};

} // namespace

double brute_force_oracle(const BroadcastModel& model, const OfflineProblem& problem, const OracleOptions& opts)
{
    problem.validate();
    const auto& tl = problem.timeline;
    const std::size_t n = tl.epoch_count();
    std::vector<std::pair<double, double>> modes;
    for (std::size_t k = 0; k < model.channels.user_count(); ++k)
        for (Eigen::Index m = 0; m < model.channels.gains[k].size(); ++m)
            modes.emplace_back(model.weights(static_cast<Eigen::Index>(k)), model.channels.gains[k](m));
    if (n > 3 || modes.size() > 2)
        throw ValidationError("oracle handles at most 3 epochs and 2 eigenmodes");
    if (opts.points < 3 || opts.refinements < 1)
        throw ValidationError("oracle needs at least 3 grid points and one level");

    std::vector<BruteEpoch> epochs;
    for (std::size_t i = 0; i < n; ++i)
        epochs.push_back({modes, tl.lengths[i], problem.circuit[i], problem.peak_power});

    const double eta = problem.storage.efficiency;
    const double slop = 1e-12 * std::max(1.0, tl.total_energy());

    // Value of a schedule given drain fractions for all but the last epoch;
    // -inf when the arrivals cannot be stored.
    const auto evaluate = [&](const std::vector<double>& frac) {
        std::vector<Point> poly{{0.0, 0.0}};
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = tl.amounts[i];
            poly = minkowski_segment(poly, {0.0, eta * e}, {e, 0.0});
            poly = clip(poly, 1, 0, problem.storage.sc_capacity, slop);
            poly = clip(poly, 0, 1, problem.storage.battery_capacity, slop);
            if (poly.empty())
                return -std::numeric_limits<double>::infinity();
            const double cap = tl.lengths[i] * (problem.peak_power + problem.circuit[i]);
            const double d_max = std::min(max_total(poly), cap);
            const double d = i + 1 < n ? frac[i] * d_max : d_max;
            total += epochs[i].value(d);
            poly = minkowski_segment(poly, {0.0, -d}, {-d, 0.0});
            poly = clip(poly, -1, 0, 0, slop);
            poly = clip(poly, 0, -1, 0, slop);
            if (poly.empty())
                return -std::numeric_limits<double>::infinity();
        }
        return total;
    };

    const std::size_t dims = n - 1;
    std::vector<double> lo(dims, 0.0), hi(dims, 1.0), best_frac(dims, 0.0);
    double best = -std::numeric_limits<double>::infinity();
    const int k = opts.points;
    for (int level = 0; level < opts.refinements; ++level) {
        std::vector<double> frac(dims);
        std::vector<int> idx(dims, 0);
        std::vector<double> level_best_frac = best_frac;
        while (true) {
            for (std::size_t d = 0; d < dims; ++d)
                frac[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / (k - 1);
            const double v = evaluate(frac);
            if (v > best) {
                best = v;
                level_best_frac = frac;
            }
            std::size_t d = 0;
            while (d < dims && ++idx[d] == k)
                idx[d++] = 0;
            if (d == dims)
                break;
        }
        best_frac = level_best_frac;
        if (dims == 0)
            break;
        for (std::size_t d = 0; d < dims; ++d) {
            const double half = 2.0 * (hi[d] - lo[d]) / (k - 1);
            lo[d] = std::max(0.0, best_frac[d] - half);
            hi[d] = std::min(1.0, best_frac[d] + half);
        }
    }
    if (!std::isfinite(best))
        throw InfeasibleError("oracle: no storable arrival split");
    return best;
}

} // namespace ehbc
