#include "tdbem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace tdbem {

namespace {

GaussRule compute_gauss(int n) {
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration from the Chebyshev estimate
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p1 = 0, p2 = 0;
        for (int iter = 0; iter < 100; ++iter) {
            p1 = 1.0;
            p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * x * p2 - j * p3) / (j + 1.0);
            }
            double dp = n * (x * p1 - p2) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        p1 = 1.0;
        p2 = 0.0;
        for (int j = 0; j < n; ++j) {
            double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j + 1.0) * x * p2 - j * p3) / (j + 1.0);
        }
        double dp = n * (x * p1 - p2) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    return rule;
}

constexpr int kInnerPts = 12;
constexpr int kOuterPts = 8;
// integrand decays like exp(-Re(s) r); contributions this far below the
// near-singularity level are dropped
constexpr double kDecayCut = 46.0;

// Panel widths capped so that |s| * width stays Gauss-resolvable.
double osc_cap(Complex s) { return 6.0 / std::abs(s); }

// int over [u0,u1] of K0(s*hypot(d,u)) * (c0 + c1*u) du with panels growing
// geometrically away from u0 (where r is smallest) and capped for
// oscillation. Caller peels off the singular piece when d == 0 == u0.
Complex k0_radial_integral(Complex s, double d, double u0, double u1, Complex c0, Complex c1,
                           double rmin_global) {
    if (u1 <= u0) return 0.0;
    const GaussRule& g = gauss_rule(kInnerPts);
    const double cap = osc_cap(s);
    const double res = s.real();
    Complex total = 0.0;
    double a = u0;
    double r_a = std::hypot(d, a);
    double width = std::max({0.5 * std::max(d, a), 1e-8 * (u1 - u0), 1e-300});
    while (a < u1) {
        if (res * (std::hypot(d, a) - rmin_global) > kDecayCut) break;
        double w = std::min(width, cap);
        double b = std::min(a + w, u1);
        double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        Complex acc = 0.0;
        for (int i = 0; i < kInnerPts; ++i) {
            double u = mid + half * g.x[i];
            acc += g.w[i] * bessel_k0(s * std::hypot(d, u)) * (c0 + c1 * u);
        }
        total += half * acc;
        a = b;
        width *= 2.0;
    }
    (void)r_a;
    return total;
}

bool nearly_collinear(const Segment& e, const Segment& f) {
    Point2 te = e.tangent(), tf = f.tangent();
    double cross_t = te.x * tf.y - te.y * tf.x;
    if (std::abs(cross_t) > 1e-12) return false;
    Point2 off = f.a - e.a;
    double cross_o = te.x * off.y - te.y * off.x;
    double scale = e.length() + f.length() + norm(off);
    return std::abs(cross_o) <= 1e-12 * scale;
}

double overlap_len(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Correlation integral for collinear segments: the double integral reduces
// to int K0(s r) w(r) dr with w the piecewise-linear interval correlation.
Complex k0_collinear_pair(Complex s, const Segment& e, const Segment& f) {
    Point2 axis = e.tangent();
    double p0 = 0.0, p1 = e.length();
    double q0 = dot(f.a - e.a, axis), q1 = dot(f.b - e.a, axis);
    if (q0 > q1) std::swap(q0, q1);

    auto w_of = [&](double r) {
        return overlap_len(p0, p1, q0 + r, q1 + r) + overlap_len(p0, p1, q0 - r, q1 - r);
    };

    std::vector<double> brk{0.0, std::abs(p0 - q0), std::abs(p0 - q1), std::abs(p1 - q0),
                            std::abs(p1 - q1)};
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end(),
                          [&](double a, double b) { return b - a < 1e-15 * (p1 + brk.back()); }),
              brk.end());

    double rmin_support = brk.back();
    for (std::size_t i = 0; i + 1 < brk.size(); ++i)
        if (w_of(0.5 * (brk[i] + brk[i + 1])) > 0.0) {
            rmin_support = brk[i];
            break;
        }

    Complex total = 0.0;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        double ra = brk[i], rb = brk[i + 1];
        // linear fit of w on (ra, rb) from two interior samples
        double s1 = ra + (rb - ra) / 3.0, s2 = ra + 2.0 * (rb - ra) / 3.0;
        double w1 = w_of(s1), w2 = w_of(s2);
        if (w1 == 0.0 && w2 == 0.0) continue;
        double slope = (w2 - w1) / (s2 - s1);
        double intercept = w1 - slope * s1;
        double start = ra;
        if (ra <= 1e-15 * rb) {
            // peel the log singularity off with the series moments
            double eps = std::min(rb, 0.5 / std::abs(s));
            total += intercept * k0_moment_small(s, eps, 0) + slope * k0_moment_small(s, eps, 1);
            start = eps;
        }
        total += k0_radial_integral(s, 0.0, start, rb, intercept, slope, rmin_support);
    }
    return total;
}

// Closest point parameter on segment e to segment f (both treated closed).
double closest_param(const Segment& e, const Segment& f) {
    auto proj = [](const Segment& seg, Point2 p) {
        Point2 ab = seg.b - seg.a;
        return std::clamp(dot(p - seg.a, ab) / dot(ab, ab), 0.0, 1.0);
    };
    double best_t = 0.0;
    double best_d = std::numeric_limits<double>::infinity();
    const double cands[] = {0.0, 1.0, proj(e, f.a), proj(e, f.b), proj(e, f.midpoint())};
    for (double t : cands) {
        Point2 x = e.at(t);
        double d = dist(x, f.at(proj(f, x)));
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
    }
    return best_t;
}

Complex k0_general_pair(Complex s, const Segment& e, const Segment& f) {
    const GaussRule& g = gauss_rule(kOuterPts);
    const double le = e.length();
    const double t_near = closest_param(e, f) * le;
    const double cap = osc_cap(s);

    auto side = [&](double a_sgn, double len) {
        // outer panels from the near point outward, in arclength offset u
        Complex acc = 0.0;
        double a = 0.0;
        double width = std::max(1e-6 * le, 1e-300);
        while (a < len) {
            double w = std::min(std::max(width, 0.5 * a), cap);
            double b = std::min(a + w, len);
            double half = 0.5 * (b - a), mid = 0.5 * (a + b);
            for (int i = 0; i < kOuterPts; ++i) {
                double t = (t_near + a_sgn * (mid + half * g.x[i])) / le;
                acc += half * g.w[i] * k0_arc_integral(s, f, e.at(t));
            }
            a = b;
            width *= 2.0;
        }
        return acc;
    };
    return side(-1.0, t_near) + side(+1.0, le - t_near);
}

}  // namespace

const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
    return it->second;
}

void gauss_on_interval(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    const GaussRule& g = gauss_rule(n);
    x.resize(n);
    w.resize(n);
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        x[i] = mid + half * g.x[i];
        w[i] = half * g.w[i];
    }
}

Complex k0_moment_small(Complex s, double eps, int j) {
    if (j != 0 && j != 1) throw std::invalid_argument("k0_moment_small: j must be 0 or 1");
    if (eps < 0.0) throw std::invalid_argument("k0_moment_small: eps must be nonnegative");
    if (eps == 0.0) return 0.0;
    if (std::abs(s) * eps > 1.0) throw std::invalid_argument("k0_moment_small: |s|*eps too large");
    Complex lse = std::log(0.5 * s * eps) + 0.57721566490153286;
    Complex q = 0.25 * s * s * eps * eps;
    Complex ak_epow = std::pow(eps, j + 1);  // a_k * eps^{2k+j+1}
    double harmonic = 0.0;
    Complex sum = 0.0;
    for (int k = 0; k < 40; ++k) {
        if (k > 0) {
            ak_epow *= q / static_cast<double>(k * k);
            harmonic += 1.0 / k;
        }
        int n1 = 2 * k + j + 1;
        Complex add = ak_epow / static_cast<double>(n1) * (-lse + 1.0 / n1 + harmonic);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

Complex k0_arc_integral(Complex s, const Segment& f, Point2 x0) {
    Point2 axis = f.tangent();
    double len = f.length();
    Point2 rel = x0 - f.a;
    double t0 = dot(rel, axis);
    double d = std::abs(axis.x * rel.y - axis.y * rel.x);

    struct Side {
        double u0, u1;
    };
    std::vector<Side> sides;
    if (t0 <= 0.0)
        sides.push_back({-t0, len - t0});
    else if (t0 >= len)
        sides.push_back({t0 - len, t0});
    else {
        sides.push_back({0.0, t0});
        sides.push_back({0.0, len - t0});
    }

    double rmin = std::hypot(d, std::min(sides[0].u0, sides.back().u0));
    Complex total = 0.0;
    for (const Side& sd : sides) {
        double u0 = sd.u0, u1 = sd.u1;
        if (u1 <= u0) continue;
        if (d <= 1e-14 * len && u0 == 0.0) {
            double eps = std::min(u1, 0.5 / std::abs(s));
            total += k0_moment_small(s, eps, 0);
            u0 = eps;
        }
        total += k0_radial_integral(s, d, u0, u1, 1.0, 0.0, rmin);
    }
    return total;
}

Complex k0_pair_integral(Complex s, const Segment& e, const Segment& f) {
    if (nearly_collinear(e, f)) return k0_collinear_pair(s, e, f);
    // put the shorter element outside: fewer outer panels
    if (e.length() <= f.length()) return k0_general_pair(s, e, f);
    return k0_general_pair(s, f, e);
}

}  // namespace tdbem
