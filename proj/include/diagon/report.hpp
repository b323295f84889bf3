#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "classifier.hpp"
#include "counting.hpp"
#include "diagonalizer.hpp"
#include "errors.hpp"
#include "polynomial.hpp"
#include "rational.hpp"

namespace diagon {

inline constexpr const char* kToolVersion = "0.1.0";

struct CountRecord {
    long n = 0;
    std::uint64_t count = 0;
    std::string region;
    bool operator==(const CountRecord&) const = default;
};

struct FitRecord {
    double alpha = 0.0;
    double r_squared = 0.0;
    bool operator==(const FitRecord&) const = default;
};

struct PredictionRecord {
    Rational exponent;
    std::string formula;
    bool operator==(const PredictionRecord&) const = default;
};

struct ClassificationRecord {
    Signature signature;
    std::vector<Rational> coefficients;   // signs give the signature
    std::vector<Rational> minors;         // angular minors, second-order equations only
    std::optional<int> normal_form_case;
    std::optional<bool> solvable;
    bool operator==(const ClassificationRecord&) const = default;
};

// Machine-readable result of one CLI command. Rationals serialize as [numerator, denominator].
struct RunReport {
    std::string version = kToolVersion;
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    std::string equation;
    std::optional<AffineTransform> transform;
    std::vector<ChainStep> chain;
    std::optional<std::string> diagonal_equation;
    std::optional<Rational> det;
    std::optional<bool> unimodular;
    std::optional<std::string> surface;
    std::vector<CountRecord> counts;
    std::optional<FitRecord> fit;
    std::optional<FitRecord> diagonal_fit;
    std::optional<PredictionRecord> prediction;
    std::optional<ClassificationRecord> classification;
    std::optional<std::string> fermat_check;
    std::optional<std::string> verdict;
    std::vector<std::string> warnings;

    bool operator==(const RunReport&) const = default;
};

namespace json_detail {

using nlohmann::json;

// Integers that fit in 64 bits are plain JSON numbers, larger ones decimal strings.
inline json integer_to_json(const Integer& v) {
    if (v.fits_slong_p()) return json(static_cast<std::int64_t>(v.get_si()));
    return json(v.get_str());
}

inline Integer integer_from_json(const json& j) {
    if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
    if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
    if (j.is_string()) return Integer(j.get<std::string>());
    throw DomainError("expected an integer in JSON report");
}

inline json rational_to_json(const Rational& q) {
    return json::array({integer_to_json(Integer(q.get_num())), integer_to_json(Integer(q.get_den()))});
}

inline Rational rational_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw DomainError("rational must be a [numerator, denominator] pair");
    return make_rational(integer_from_json(j[0]), integer_from_json(j[1]));
}

inline json rationals_to_json(const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& q : v) a.push_back(rational_to_json(q));
    return a;
}

inline std::vector<Rational> rationals_from_json(const json& j) {
    std::vector<Rational> v;
    for (const auto& e : j) v.push_back(rational_from_json(e));
    return v;
}

inline json transform_to_json(const AffineTransform& t) {
    json rows = json::array();
    for (std::size_t i = 0; i < t.matrix.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < t.matrix.cols(); ++j) row.push_back(rational_to_json(t.matrix(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"matrix", std::move(rows)}, {"translation", rationals_to_json(t.translation)}};
}

inline AffineTransform transform_from_json(const json& j) {
    const json& rows = j.at("matrix");
    const std::size_t k = rows.size();
    Matrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        if (rows[i].size() != k) throw DomainError("transform matrix must be square");
        for (std::size_t l = 0; l < k; ++l) m(i, l) = rational_from_json(rows[i][l]);
    }
    return AffineTransform(std::move(m), rationals_from_json(j.at("translation")));
}

template <class T, class F>
json optional_to_json(const std::optional<T>& v, F&& f) {
    return v ? f(*v) : json(nullptr);
}

} // namespace json_detail

inline nlohmann::json to_json(const RunReport& r) {
    using namespace json_detail;
    json j;
    j["version"] = r.version;
    j["command"] = r.command;
    j["inputs"] = r.inputs;
    j["equation"] = r.equation;
    j["transform"] = optional_to_json(r.transform, transform_to_json);
    json chain = json::array();
    for (const auto& s : r.chain) {
        json step = transform_to_json(s.transform);
        step["label"] = to_string(s.kind);
        chain.push_back(std::move(step));
    }
    j["chain"] = std::move(chain);
    j["diagonal_equation"] = optional_to_json(r.diagonal_equation, [](const std::string& s) { return json(s); });
    j["det"] = optional_to_json(r.det, rational_to_json);
    j["unimodular"] = optional_to_json(r.unimodular, [](bool b) { return json(b); });
    j["surface"] = optional_to_json(r.surface, [](const std::string& s) { return json(s); });
    json counts = json::array();
    for (const auto& c : r.counts) counts.push_back({{"n", c.n}, {"count", c.count}, {"region", c.region}});
    j["counts"] = std::move(counts);
    auto fit_json = [](const FitRecord& f) { return json{{"alpha", f.alpha}, {"r_squared", f.r_squared}}; };
    j["fit"] = optional_to_json(r.fit, fit_json);
    j["diagonal_fit"] = optional_to_json(r.diagonal_fit, fit_json);
    j["prediction"] = optional_to_json(r.prediction, [](const PredictionRecord& p) {
        return json{{"exponent", rational_to_json(p.exponent)}, {"formula", p.formula}};
    });
    j["classification"] = optional_to_json(r.classification, [](const ClassificationRecord& c) {
        json out{{"signature", {{"positive", c.signature.positive}, {"negative", c.signature.negative},
                                {"zero", c.signature.zero}}},
                 {"coefficients", rationals_to_json(c.coefficients)},
                 {"minors", rationals_to_json(c.minors)}};
        out["normal_form_case"] = c.normal_form_case ? json(*c.normal_form_case) : json(nullptr);
        out["solvable"] = c.solvable ? json(*c.solvable) : json(nullptr);
        return out;
    });
    j["fermat_check"] = optional_to_json(r.fermat_check, [](const std::string& s) { return json(s); });
    j["verdict"] = optional_to_json(r.verdict, [](const std::string& s) { return json(s); });
    j["warnings"] = r.warnings;
    return j;
}

inline RunReport report_from_json(const nlohmann::json& j) {
    using namespace json_detail;
    auto opt_string = [&](const char* key) -> std::optional<std::string> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        return j.at(key).get<std::string>();
    };
    auto present = [&](const char* key) { return j.contains(key) && !j.at(key).is_null(); };

    RunReport r;
    r.version = j.at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.inputs = j.value("inputs", json::object());
    r.equation = j.at("equation").get<std::string>();
    if (present("transform")) r.transform = transform_from_json(j.at("transform"));
    for (const auto& s : j.value("chain", json::array())) {
        const auto kind = step_kind_from_string(s.at("label").get<std::string>());
        if (!kind) throw DomainError("unknown chain label");
        r.chain.push_back({*kind, transform_from_json(s)});
    }
    r.diagonal_equation = opt_string("diagonal_equation");
    if (present("det")) r.det = rational_from_json(j.at("det"));
    if (present("unimodular")) r.unimodular = j.at("unimodular").get<bool>();
    r.surface = opt_string("surface");
    if (r.surface && !surface_from_string(*r.surface)) throw DomainError("unknown surface class");
    for (const auto& c : j.value("counts", json::array()))
        r.counts.push_back({c.at("n").get<long>(), c.at("count").get<std::uint64_t>(), c.at("region").get<std::string>()});
    auto fit_from = [](const json& f) { return FitRecord{f.at("alpha").get<double>(), f.at("r_squared").get<double>()}; };
    if (present("fit")) r.fit = fit_from(j.at("fit"));
    if (present("diagonal_fit")) r.diagonal_fit = fit_from(j.at("diagonal_fit"));
    if (present("prediction")) {
        const json& p = j.at("prediction");
        r.prediction = PredictionRecord{rational_from_json(p.at("exponent")), p.at("formula").get<std::string>()};
    }
    if (present("classification")) {
        const json& c = j.at("classification");
        ClassificationRecord rec;
        const json& sig = c.at("signature");
        rec.signature = {sig.at("positive").get<std::size_t>(), sig.at("negative").get<std::size_t>(),
                         sig.at("zero").get<std::size_t>()};
        rec.coefficients = rationals_from_json(c.at("coefficients"));
        rec.minors = rationals_from_json(c.at("minors"));
        if (!c.at("normal_form_case").is_null()) rec.normal_form_case = c.at("normal_form_case").get<int>();
        if (!c.at("solvable").is_null()) rec.solvable = c.at("solvable").get<bool>();
        r.classification = std::move(rec);
    }
    r.fermat_check = opt_string("fermat_check");
    r.verdict = opt_string("verdict");
    if (r.verdict && !verdict_from_string(*r.verdict)) throw DomainError("unknown verdict");
    r.warnings = j.value("warnings", std::vector<std::string>{});
    return r;
}

} // namespace diagon
