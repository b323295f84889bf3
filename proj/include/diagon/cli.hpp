#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "classifier.hpp"
#include "counting.hpp"
#include "diagonalizer.hpp"
#include "errors.hpp"
#include "parser.hpp"
#include "report.hpp"

namespace diagon::cli {

enum ExitCode : int {
    kOk = 0,
    kParseError = 2,
    kPipelineError = 3,
    kDivergent = 4,
    kInconclusive = 5,
    kResourceLimit = 6,
};

struct Settings {
    CountOptions count;
    double fermat_constant = kDefaultFermatConstant;
    double r_squared_threshold = kDefaultRSquaredThreshold;
};

struct Outcome {
    std::optional<RunReport> report; // empty on hard failures
    int exit_code = kOk;
    std::string diagnostic;
};

inline std::vector<long> default_grid() { return {32, 64, 128, 256, 512}; }

// "a,b,c" of strictly increasing positive integers.
inline std::vector<long> parse_grid(const std::string& text) {
    std::vector<long> grid;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::string t = detail::trim(item);
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
            throw DomainError("grid entries must be positive integers: '" + text + "'");
        grid.push_back(std::stol(t));
    }
    validate_grid(grid);
    return grid;
}

// DIAGON_CEILING, when set, replaces the built-in enumeration ceiling.
inline std::uint64_t ceiling_from_environment(std::uint64_t fallback = kDefaultCeiling) {
    const char* env = std::getenv("DIAGON_CEILING");
    if (env == nullptr || *env == '\0') return fallback;
    const std::string value = detail::trim(env);
    if (value.find_first_not_of("0123456789") != std::string::npos)
        throw DomainError("DIAGON_CEILING must be a non-negative integer");
    return std::stoull(value);
}

namespace detail {

inline RunReport base_report(const std::string& command, const Equation& e) {
    RunReport r;
    r.command = command;
    r.equation = format_equation(e);
    if (e.name) r.inputs["name"] = *e.name;
    return r;
}

inline void attach(RunReport& r, const DiagonalizationReport& d) {
    r.transform = d.integer_transform;
    r.chain = d.chain.steps();
    r.diagonal_equation = format_equation(d.diagonal);
    r.det = d.det;
    r.unimodular = d.is_unimodular;
    r.surface = to_string(d.surface);
    r.warnings.insert(r.warnings.end(), d.warnings.begin(), d.warnings.end());
}

inline CountRecord record(const CountResult& c) { return {c.n, c.count, to_string(c.region)}; }

inline PredictionRecord record(const ExponentPrediction& p) { return {p.exponent, to_string(p.formula)}; }

// Exponent prediction for e, diagonalizing first when needed. Failures become warnings.
inline std::optional<ExponentPrediction> try_predict(const Equation& e, std::vector<std::string>& warnings) {
    try {
        if (e.lhs.is_diagonal()) return predicted_exponent(e);
        return predicted_exponent(diagonalize(e).diagonal);
    } catch (const Error& err) {
        warnings.push_back(std::string("no exponent prediction: ") + err.what());
        return std::nullopt;
    }
}

// Signature source: Lagrange coefficients for second order, power coefficients for diagonal input.
inline ClassificationRecord classification(const Equation& e) {
    ClassificationRecord rec;
    if (e.degree() == 2) {
        const SymmetricMatrix form = quadratic_form_matrix(e.lhs);
        rec.minors = angular_minors(form);
        rec.coefficients = lagrange_reduce(form).coefficients;
        bool unit_minors = form.size() == 3;
        for (const auto& m : rec.minors) unit_minors = unit_minors && (m == 1 || m == -1);
        if (unit_minors) {
            const NormalFormCase c = normal_form_case(rec.minors);
            rec.normal_form_case = c.index;
            rec.solvable = c.solvable;
        }
    } else if (e.lhs.is_diagonal()) {
        const std::size_t k = e.nvars();
        rec.coefficients.assign(k, Rational(0));
        for (const auto& [m, c] : e.lhs.terms())
            for (std::size_t i = 0; i < k; ++i)
                if (m[i] >= 2) rec.coefficients[i] = c;
    } else {
        throw PipelineError("classification needs a second-order or diagonal equation");
    }
    rec.signature = signature(rec.coefficients);
    return rec;
}

// Ternary homogeneous second-order equation of full indefinite rank.
inline bool is_fermat_like(const Equation& e) {
    if (e.nvars() != 3 || e.degree() != 2 || !e.lhs.is_homogeneous()) return false;
    const Signature s = signature(lagrange_reduce(quadratic_form_matrix(e.lhs)).coefficients);
    return s.zero == 0 && s.positive > 0 && s.negative > 0;
}

template <class F>
Outcome guarded(F&& body) {
    try {
        return body();
    } catch (const ResourceLimitError& err) {
        return {std::nullopt, kResourceLimit, err.what()};
    } catch (const ParseError& err) {
        return {std::nullopt, kParseError, err.what()};
    } catch (const Error& err) {
        return {std::nullopt, kPipelineError, err.what()};
    }
}

} // namespace detail

inline Outcome cmd_diagonalize(const Equation& e, const Settings& = {}) {
    return detail::guarded([&]() -> Outcome {
        RunReport r = detail::base_report("diagonalize", e);
        detail::attach(r, diagonalize(e));
        return {std::move(r), kOk, {}};
    });
}

inline Outcome cmd_count(const Equation& e, const std::vector<long>& ns, bool pullback, const Settings& settings = {}) {
    return detail::guarded([&]() -> Outcome {
        if (ns.empty()) throw DomainError("no N given");
        RunReport r = detail::base_report("count", e);
        r.inputs["n"] = ns;
        r.inputs["pullback"] = pullback;
        std::optional<DiagonalizationReport> d;
        if (pullback) {
            d = diagonalize(e);
            detail::attach(r, *d);
        }
        for (long n : ns) {
            const CountResult c = pullback ? count_pullback(*d, n, settings.count) : count_hypercube(e, n, settings.count);
            r.counts.push_back(detail::record(c));
        }
        return {std::move(r), kOk, {}};
    });
}

inline Outcome cmd_fit(const Equation& e, const std::vector<long>& grid, const Settings& settings = {}) {
    return detail::guarded([&]() -> Outcome {
        RunReport r = detail::base_report("fit", e);
        r.inputs["grid"] = grid;
        validate_grid(grid);
        std::vector<CountResult> samples;
        for (long n : grid) samples.push_back(count_hypercube(e, n, settings.count));
        for (const auto& s : samples) r.counts.push_back(detail::record(s));
        if (auto p = detail::try_predict(e, r.warnings)) r.prediction = detail::record(*p);
        if (detail::is_fermat_like(e)) {
            std::vector<std::pair<long, std::uint64_t>> pts;
            for (const auto& s : samples) pts.emplace_back(s.n, s.count);
            r.fermat_check = to_string(fermat_bound_check(pts, settings.fermat_constant));
        }
        try {
            const ExponentFit fit = fit_counts(samples);
            r.fit = FitRecord{fit.alpha, fit.r_squared};
        } catch (const NoFitError& err) {
            r.warnings.push_back(std::string("no-fit: ") + err.what());
            return {std::move(r), kInconclusive, err.what()};
        }
        return {std::move(r), kOk, {}};
    });
}

inline Outcome cmd_classify(const Equation& e, const Settings& = {}) {
    return detail::guarded([&]() -> Outcome {
        RunReport r = detail::base_report("classify", e);
        r.classification = detail::classification(e);
        if (e.lhs.is_diagonal()) {
            r.surface = to_string(classify_diagonal(e.lhs));
        } else {
            const DiagonalizationReport d = diagonalize(e);
            r.diagonal_equation = format_equation(d.diagonal);
            r.surface = to_string(d.surface);
            r.warnings.insert(r.warnings.end(), d.warnings.begin(), d.warnings.end());
        }
        if (auto p = detail::try_predict(e, r.warnings)) r.prediction = detail::record(*p);
        return {std::move(r), kOk, {}};
    });
}

inline Outcome cmd_verify(const Equation& e, const std::vector<long>& grid, double tolerance,
                          const Settings& settings = {}) {
    return detail::guarded([&]() -> Outcome {
        RunReport r = detail::base_report("verify", e);
        r.inputs["grid"] = grid;
        r.inputs["tol"] = tolerance;
        const DiagonalizationReport d = diagonalize(e);
        detail::attach(r, d);
        const PreservationCheck check = verify_preservation(d, grid, tolerance, settings.count,
                                                            settings.r_squared_threshold);
        if (check.original) {
            for (const auto& s : check.original->samples) r.counts.push_back(detail::record(s));
            r.fit = FitRecord{check.original->alpha, check.original->r_squared};
        }
        if (check.diagonal) r.diagonal_fit = FitRecord{check.diagonal->alpha, check.diagonal->r_squared};
        r.verdict = to_string(check.verdict);
        if (check.verdict == Verdict::inconclusive) r.warnings.push_back("inconclusive: " + check.reason);
        const int code = check.verdict == Verdict::preserved   ? kOk
                         : check.verdict == Verdict::divergent ? kDivergent
                                                               : kInconclusive;
        return {std::move(r), code, check.reason};
    });
}

// Plain-text rendering for --text.
inline std::string render_text(const RunReport& r) {
    std::ostringstream out;
    out << "command:   " << r.command << "\n";
    out << "equation:  " << r.equation << "\n";
    if (r.diagonal_equation) out << "diagonal:  " << *r.diagonal_equation << "\n";
    if (r.transform) {
        out << "transform: ";
        const auto& t = *r.transform;
        for (std::size_t i = 0; i < t.dimension(); ++i) {
            out << (i ? ", " : "") << "x" << i + 1 << " = ";
            Polynomial row(t.dimension());
            for (std::size_t j = 0; j < t.dimension(); ++j) row.add_term(Monomial::unit(t.dimension(), j), t.matrix(i, j));
            row.add_term(Monomial(t.dimension()), t.translation[i]);
            out << format_polynomial(row);
        }
        out << "\n";
        for (const auto& s : r.chain) out << "  step:    " << to_string(s.kind) << "\n";
    }
    if (r.det) out << "det:       " << to_string(*r.det) << (r.unimodular && *r.unimodular ? " (unimodular)" : "") << "\n";
    if (r.surface) out << "surface:   " << *r.surface << "\n";
    if (r.classification) {
        const auto& c = *r.classification;
        out << "signature: r=" << c.signature.positive << " s=" << c.signature.negative << " z=" << c.signature.zero << "\n";
        if (c.normal_form_case)
            out << "normal form case " << *c.normal_form_case << (c.solvable && *c.solvable ? " (solvable)" : " (trivial only)") << "\n";
    }
    for (const auto& c : r.counts) out << "count:     N=" << c.n << " -> " << c.count << " (" << c.region << ")\n";
    if (r.fit) out << "fit:       alpha=" << r.fit->alpha << " r2=" << r.fit->r_squared << "\n";
    if (r.diagonal_fit) out << "diag fit:  alpha=" << r.diagonal_fit->alpha << " r2=" << r.diagonal_fit->r_squared << "\n";
    if (r.prediction) out << "predicted: N^" << to_string(r.prediction->exponent) << " (" << r.prediction->formula << ")\n";
    if (r.fermat_check) out << "fermat:    " << *r.fermat_check << "\n";
    if (r.verdict) out << "verdict:   " << *r.verdict << "\n";
    for (const auto& w : r.warnings) out << "warning:   " << w << "\n";
    return out.str();
}

} // namespace diagon::cli
