#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "classifier.hpp"
#include "diagonalizer.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "parser.hpp"
#include "polynomial.hpp"
#include "rational.hpp"

namespace diagon {

inline constexpr std::uint64_t kDefaultCeiling = 10'000'000'000ULL;

struct CountOptions {
    std::uint64_t ceiling = kDefaultCeiling; // maximum number of enumerated points
    unsigned workers = 1;
};

enum class Region { hypercube, pullback_image };

inline std::string to_string(Region r) { return r == Region::hypercube ? "hypercube" : "pullback-image"; }

inline std::optional<Region> region_from_string(std::string_view s) {
    if (s == "hypercube") return Region::hypercube;
    if (s == "pullback-image") return Region::pullback_image;
    return std::nullopt;
}

struct CountResult {
    long n = 0;
    std::uint64_t count = 0;
    Region region = Region::hypercube;
    std::chrono::nanoseconds elapsed{0};
};

namespace detail {

using Int128 = __int128;

template <class T>
struct IntTerm {
    T coefficient;
    std::vector<unsigned> exponents;
};

template <class T>
T to_number(const Integer& v);

template <>
inline Integer to_number<Integer>(const Integer& v) {
    return v;
}

template <>
inline Int128 to_number<Int128>(const Integer& v) {
    // |v| < 2^126 is guaranteed by the caller's bound check
    Integer mag = abs(v);
    const Integer lo = mag & Integer("18446744073709551615");
    const Integer hi = mag >> 64;
    Int128 r = (static_cast<Int128>(hi.get_ui()) << 64) | static_cast<Int128>(lo.get_ui());
    return v < 0 ? -r : r;
}

inline std::int64_t as_i64(const Int128& v) { return static_cast<std::int64_t>(v); }
inline std::int64_t as_i64(const Integer& v) { return v.get_si(); }

template <class T>
T eval_terms(const std::vector<IntTerm<T>>& terms, const std::vector<std::int64_t>& x) {
    T sum = 0;
    for (const auto& t : terms) {
        T v = t.coefficient;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (unsigned e = 0; e < t.exponents[i]; ++e) v *= static_cast<T>(x[i]);
        sum += v;
    }
    return sum;
}

// Exact floor of the n-th root of v >= 0, by binary search.
template <class T>
T iroot(const T& v, unsigned n) {
    if (v < 2 || n == 1) return v;
    // r^n <= v compared without overflow: stop multiplying once the product exceeds v
    auto pow_le = [&](const T& r) {
        T acc = 1;
        for (unsigned i = 0; i < n; ++i) {
            if (r != 0 && acc > v / r) return false;
            acc *= r;
        }
        return acc <= v;
    };
    T lo = 1, hi = 2;
    while (pow_le(hi)) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        T mid = lo + (hi - lo) / 2;
        if (pow_le(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

template <class T>
T ipow_small(T base, unsigned e) {
    T r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

template <class T>
T floor_mod(const T& a, const T& b) {
    T r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) r += b;
    return r;
}

enum class Strategy { full_scan, linear, pure_power };

// Everything the enumeration loop needs, with coefficients in T.
template <class T>
struct Problem {
    std::size_t k = 0;
    std::vector<std::int64_t> lo, hi;
    Strategy strategy = Strategy::full_scan;
    std::size_t solved = 0;                 // solved variable for linear / pure_power
    unsigned power = 1;                     // exponent of the solved variable
    std::vector<IntTerm<T>> all;            // full polynomial (full scan)
    std::vector<IntTerm<T>> slope;          // linear: coefficient polynomial of x_s
    std::vector<IntTerm<T>> rest;           // terms free of x_s
    T lead = 0;                             // pure power: coefficient of x_s^n
    bool filtered = false;                  // pullback: |rows * x + shift| <= bound
    std::vector<std::vector<T>> rows;
    std::vector<T> shift;
    T bound = 0;

    bool accept(const std::vector<std::int64_t>& x) const {
        if (!filtered) return true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            T v = shift[i];
            for (std::size_t j = 0; j < k; ++j) v += rows[i][j] * static_cast<T>(x[j]);
            if (v > bound || v < -bound) return false;
        }
        return true;
    }

    bool in_range(const T& v) const { return v >= static_cast<T>(lo[solved]) && v <= static_cast<T>(hi[solved]); }

    // Solutions with the iterated coordinates fixed in x.
    std::uint64_t count_at(std::vector<std::int64_t>& x) const {
        switch (strategy) {
            case Strategy::full_scan: return eval_terms(all, x) == 0 && accept(x) ? 1 : 0;
            case Strategy::linear: {
                const T a = eval_terms(slope, x);
                const T b = eval_terms(rest, x);
                if (a == 0) {
                    if (b != 0) return 0;
                    std::uint64_t c = 0;
                    for (std::int64_t v = lo[solved]; v <= hi[solved]; ++v) {
                        x[solved] = v;
                        c += accept(x) ? 1 : 0;
                    }
                    return c;
                }
                if (floor_mod(b, a) != 0) return 0;
                const T v = -b / a;
                if (!in_range(v)) return 0;
                x[solved] = as_i64(v);
                return accept(x) ? 1 : 0;
            }
            case Strategy::pure_power: {
                const T b = eval_terms(rest, x);
                if (floor_mod(b, lead) != 0) return 0;
                const T target = -b / lead;
                std::vector<T> roots;
                if (target == 0) {
                    roots.push_back(0);
                } else if (power % 2 == 0) {
                    if (target < 0) return 0;
                    const T r = iroot(target, power);
                    if (ipow_small(r, power) != target) return 0;
                    roots.push_back(r);
                    roots.push_back(-r);
                } else {
                    const T mag = target < 0 ? T(-target) : target;
                    const T r = iroot(mag, power);
                    if (ipow_small(r, power) != mag) return 0;
                    roots.push_back(target < 0 ? T(-r) : r);
                }
                std::uint64_t c = 0;
                for (const T& r : roots) {
                    if (!in_range(r)) continue;
                    x[solved] = as_i64(r);
                    c += accept(x) ? 1 : 0;
                }
                return c;
            }
        }
        return 0;
    }
};

// Counts over the box, iterating every coordinate except the solved one.
template <class T>
std::uint64_t run(const Problem<T>& problem, unsigned workers) {
    std::vector<std::size_t> iterated;
    for (std::size_t i = 0; i < problem.k; ++i)
        if (problem.strategy == Strategy::full_scan || i != problem.solved) iterated.push_back(i);
    for (std::size_t i = 0; i < problem.k; ++i)
        if (problem.lo[i] > problem.hi[i]) return 0;

    auto sweep = [&](std::int64_t outer_lo, std::int64_t outer_hi) {
        std::vector<std::int64_t> x(problem.k, 0);
        if (iterated.empty()) return problem.count_at(x);
        for (std::size_t idx : iterated) x[idx] = problem.lo[idx];
        x[iterated[0]] = outer_lo;
        std::uint64_t total = 0;
        while (true) {
            total += problem.count_at(x);
            std::size_t level = iterated.size();
            while (level > 0) {
                const std::size_t var = iterated[level - 1];
                const std::int64_t top = level == 1 ? outer_hi : problem.hi[var];
                if (x[var] < top) {
                    ++x[var];
                    break;
                }
                x[var] = problem.lo[var];
                --level;
            }
            if (level == 0) break;
        }
        return total;
    };

    if (iterated.empty()) return sweep(0, 0);
    const std::int64_t lo = problem.lo[iterated[0]];
    const std::int64_t hi = problem.hi[iterated[0]];
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const unsigned chunks = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), span));
    if (chunks <= 1) return sweep(lo, hi);

    std::vector<std::uint64_t> subtotal(chunks, 0);
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (unsigned c = 0; c < chunks; ++c) {
        const std::int64_t a = lo + static_cast<std::int64_t>(span * c / chunks);
        const std::int64_t b = lo + static_cast<std::int64_t>(span * (c + 1) / chunks) - 1;
        pool.emplace_back([&, a, b, c] { subtotal[c] = sweep(a, b); });
    }
    for (auto& t : pool) t.join();
    std::uint64_t total = 0;
    for (auto s : subtotal) total += s;
    return total;
}

struct Box {
    std::vector<Integer> lo, hi;
};

struct Filter {
    Matrix rows;   // integer after scaling
    Vector shift;
    Integer bound;
};

// x_s enters only as a_s(x) * x_s: the first such variable. Otherwise the last variable whose
// only occurrence is a single pure-power monomial.
inline std::pair<Strategy, std::size_t> choose_strategy(const Polynomial& p) {
    const std::size_t k = p.nvars();
    for (std::size_t s = 0; s < k; ++s)
        if (p.degree_in(s) == 1) return {Strategy::linear, s};
    for (std::size_t s = k; s-- > 0;) {
        std::size_t occurrences = 0;
        bool pure = true;
        for (const auto& [m, c] : p.terms()) {
            if (m[s] == 0) continue;
            ++occurrences;
            if (m.variables_involved() != 1) pure = false;
        }
        if (occurrences == 1 && pure) return {Strategy::pure_power, s};
    }
    return {Strategy::full_scan, 0};
}

template <class T>
Problem<T> build(const Polynomial& integral, const Box& box, const std::optional<Filter>& filter) {
    Problem<T> pr;
    pr.k = integral.nvars();
    for (std::size_t i = 0; i < pr.k; ++i) {
        pr.lo.push_back(box.lo[i].get_si());
        pr.hi.push_back(box.hi[i].get_si());
    }
    const auto [strategy, solved] = choose_strategy(integral);
    pr.strategy = strategy;
    pr.solved = solved;
    for (const auto& [m, c] : integral.terms()) {
        IntTerm<T> t{to_number<T>(Integer(c.get_num())), m.exponents};
        pr.all.push_back(t);
        if (strategy == Strategy::full_scan) continue;
        if (m[solved] == 0) {
            pr.rest.push_back(t);
        } else if (strategy == Strategy::linear) {
            t.exponents[solved] = 0;
            pr.slope.push_back(t);
        } else {
            pr.lead = t.coefficient;
            pr.power = m[solved];
        }
    }
    if (filter) {
        pr.filtered = true;
        pr.bound = to_number<T>(filter->bound);
        for (std::size_t i = 0; i < filter->rows.rows(); ++i) {
            std::vector<T> row;
            for (std::size_t j = 0; j < filter->rows.cols(); ++j)
                row.push_back(to_number<T>(Integer(filter->rows(i, j).get_num())));
            pr.rows.push_back(std::move(row));
            pr.shift.push_back(to_number<T>(Integer(filter->shift[i].get_num())));
        }
    }
    return pr;
}

// Exact count of integer points of the box where p vanishes (and the filter holds).
inline std::uint64_t count_in_box(const Polynomial& p, const Box& box, const std::optional<Filter>& filter,
                                  const CountOptions& options) {
    const std::size_t k = p.nvars();
    if (k == 0) throw DimensionError("equation has no variables");
    for (std::size_t i = 0; i < k; ++i)
        if (box.lo[i] > box.hi[i]) return 0;

    // Zero set is unchanged by scaling to coprime integer coefficients.
    if (p.is_zero()) {
        Integer volume = 1;
        for (std::size_t i = 0; i < k; ++i) volume *= box.hi[i] - box.lo[i] + 1;
        if (volume > Integer(std::to_string(options.ceiling)))
            throw ResourceLimitError("enumeration volume " + volume.get_str() + " exceeds the ceiling");
        if (!filter) return volume.get_ui();
    }
    const Polynomial integral = p.is_zero() ? p : content_normalize(p).primitive;

    const auto [strategy, solved] = choose_strategy(integral);
    Integer volume = 1;
    for (std::size_t i = 0; i < k; ++i)
        if (strategy == Strategy::full_scan || i != solved) volume *= box.hi[i] - box.lo[i] + 1;
    if (volume > Integer(std::to_string(options.ceiling)))
        throw ResourceLimitError("enumeration volume " + volume.get_str() + " exceeds the ceiling of " +
                                 std::to_string(options.ceiling) + " points");

    for (std::size_t i = 0; i < k; ++i)
        if (abs(box.lo[i]) > Integer("4611686018427387903") || abs(box.hi[i]) > Integer("4611686018427387903"))
            throw ResourceLimitError("coordinate range exceeds 64-bit enumeration");

    // Largest magnitude any intermediate can take decides between 128-bit and GMP arithmetic.
    Integer reach = 1;
    std::vector<Integer> radius(k);
    for (std::size_t i = 0; i < k; ++i) {
        radius[i] = std::max(abs(box.lo[i]), abs(box.hi[i]));
        reach = std::max(reach, radius[i]);
    }
    Integer magnitude = 0;
    for (const auto& [m, c] : integral.terms()) {
        Integer t = abs(Integer(c.get_num()));
        for (std::size_t i = 0; i < k; ++i) t *= ipow(radius[i], m[i]);
        magnitude += t;
    }
    if (filter) {
        for (std::size_t i = 0; i < filter->rows.rows(); ++i) {
            Integer t = abs(Integer(filter->shift[i].get_num()));
            for (std::size_t j = 0; j < k; ++j) t += abs(Integer(filter->rows(i, j).get_num())) * radius[j];
            magnitude = std::max(magnitude, t);
        }
        magnitude = std::max(magnitude, filter->bound);
    }
    magnitude = std::max(magnitude, reach) * reach * 4;

    const Integer limit = Integer(1) << 120;
    if (magnitude < limit) return run(build<Int128>(integral, box, filter), options.workers);
    return run(build<Integer>(integral, box, filter), options.workers);
}

inline Box hypercube_box(std::size_t k, long n) {
    return Box{std::vector<Integer>(k, Integer(-n)), std::vector<Integer>(k, Integer(n))};
}

} // namespace detail

// Integer solutions of e in [-N, N]^k.
inline CountResult count_hypercube(const Equation& e, long n, const CountOptions& options = {}) {
    if (n < 1) throw DomainError("N must be positive");
    if (e.nvars() == 0) throw DimensionError("equation has no variables");
    const auto start = std::chrono::steady_clock::now();
    CountResult r;
    r.n = n;
    r.region = Region::hypercube;
    r.count = detail::count_in_box(e.lhs, detail::hypercube_box(e.nvars(), n), std::nullopt, options);
    r.elapsed = std::chrono::steady_clock::now() - start;
    return r;
}

// Integer x' with transformed(x') = 0 and t(x') in [-N, N]^k, enumerated over the bounding box
// of the pulled-back hypercube.
inline CountResult count_pullback(const Polynomial& transformed, const AffineTransform& t, long n,
                                  const CountOptions& options = {}) {
    if (n < 1) throw DomainError("N must be positive");
    const std::size_t k = transformed.nvars();
    if (t.dimension() != k) throw DimensionError("transform dimension does not match the equation");
    const auto start = std::chrono::steady_clock::now();

    const std::vector<Vector> corners = image_vertices(t, n);
    detail::Box box{std::vector<Integer>(k), std::vector<Integer>(k)};
    for (std::size_t i = 0; i < k; ++i) {
        Rational lo = corners[0][i], hi = corners[0][i];
        for (const auto& v : corners) {
            lo = std::min(lo, v[i]);
            hi = std::max(hi, v[i]);
        }
        box.lo[i] = ceil(lo);
        box.hi[i] = floor(hi);
    }

    // Scale t to integers: |D*C x' + D*c| <= D*N.
    Integer scale = 1;
    for (std::size_t i = 0; i < k; ++i) {
        scale = lcm(scale, Integer(t.translation[i].get_den()));
        for (std::size_t j = 0; j < k; ++j) scale = lcm(scale, Integer(t.matrix(i, j).get_den()));
    }
    detail::Filter filter{Matrix(k, k), Vector(k), scale * n};
    for (std::size_t i = 0; i < k; ++i) {
        filter.shift[i] = t.translation[i] * scale;
        for (std::size_t j = 0; j < k; ++j) filter.rows(i, j) = t.matrix(i, j) * scale;
    }

    CountResult r;
    r.n = n;
    r.region = Region::pullback_image;
    r.count = detail::count_in_box(transformed, box, filter, options);
    r.elapsed = std::chrono::steady_clock::now() - start;
    return r;
}

inline CountResult count_pullback(const DiagonalizationReport& report, long n, const CountOptions& options = {}) {
    return count_pullback(report.diagonal.lhs, report.integer_transform, n, options);
}

struct ExponentFit {
    std::vector<CountResult> samples;
    std::vector<long> excluded;    // grid points with zero count
    double alpha = 0.0;
    double r_squared = 0.0;
    std::optional<ExponentPrediction> predicted;
};

inline void validate_grid(std::span<const long> grid) {
    if (grid.size() < 3) throw DomainError("grid needs at least 3 entries");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 1) throw DomainError("grid entries must be positive");
        if (i > 0 && grid[i] <= grid[i - 1]) throw DomainError("grid must be strictly increasing");
    }
}

// Least-squares slope of log(count) against log(N) over the nonzero samples.
inline ExponentFit fit_counts(std::vector<CountResult> samples) {
    ExponentFit fit;
    std::vector<double> xs, ys;
    for (const auto& s : samples) {
        if (s.count == 0) {
            fit.excluded.push_back(s.n);
            continue;
        }
        xs.push_back(std::log(static_cast<double>(s.n)));
        ys.push_back(std::log(static_cast<double>(s.count)));
    }
    fit.samples = std::move(samples);
    if (xs.size() < 3 || 2 * fit.excluded.size() > fit.samples.size())
        throw NoFitError("fewer than 3 grid points have solutions");

    const double count = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    fit.alpha = sxy / sxx;
    const double intercept = my - fit.alpha * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + fit.alpha * xs[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

inline ExponentFit fit_exponent(const Equation& e, std::span<const long> grid, const CountOptions& options = {}) {
    validate_grid(grid);
    std::vector<CountResult> samples;
    samples.reserve(grid.size());
    for (long n : grid) samples.push_back(count_hypercube(e, n, options));
    return fit_counts(std::move(samples));
}

enum class Verdict { preserved, divergent, inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::preserved: return "preserved";
        case Verdict::divergent: return "divergent";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

inline std::optional<Verdict> verdict_from_string(std::string_view s) {
    for (auto v : {Verdict::preserved, Verdict::divergent, Verdict::inconclusive})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

inline constexpr double kDefaultRSquaredThreshold = 0.9;

struct PreservationCheck {
    Verdict verdict = Verdict::inconclusive;
    std::optional<ExponentFit> original;
    std::optional<ExponentFit> diagonal;
    std::string reason;
};

// Compares the fitted exponents of the original and the diagonal equation over hypercubes.
inline PreservationCheck verify_preservation(const DiagonalizationReport& report, std::span<const long> grid,
                                             double tolerance, const CountOptions& options = {},
                                             double r_squared_threshold = kDefaultRSquaredThreshold) {
    validate_grid(grid);
    PreservationCheck check;
    try {
        check.original = fit_exponent(report.original, grid, options);
        check.diagonal = fit_exponent(report.diagonal, grid, options);
    } catch (const NoFitError& err) {
        check.reason = err.what();
        return check;
    }
    if (check.original->r_squared < r_squared_threshold || check.diagonal->r_squared < r_squared_threshold) {
        check.reason = "fit quality below threshold";
        return check;
    }
    const double gap = std::abs(check.original->alpha - check.diagonal->alpha);
    check.verdict = gap <= tolerance ? Verdict::preserved : Verdict::divergent;
    check.reason = "exponent gap " + std::to_string(gap);
    return check;
}

} // namespace diagon
