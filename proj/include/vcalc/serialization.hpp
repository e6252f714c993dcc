#ifndef VCALC_SERIALIZATION_HPP
#define VCALC_SERIALIZATION_HPP

// JSON forms of bounds, models and patches. Doubles are written with
// round-trip precision, so reading a written value gives the same object.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vcalc/function_patch.hpp"
#include "vcalc/solvers.hpp"

namespace vcalc {

using Json = nlohmann::json;

inline Json to_json(const ValidatedBounds& x) { return Json::array({x.lower(), x.upper()}); }

inline Json to_json(const Box& b) {
    Json j = Json::array();
    for (const auto& x : b) {
        j.push_back(to_json(x));
    }
    return j;
}

inline Json to_json(const Sweeper& s) {
    switch (s.kind()) {
    case Sweeper::Kind::threshold:
        return {{"kind", "threshold"}, {"threshold", s.threshold_value()}};
    case Sweeper::Kind::graded:
        return {{"kind", "graded"}, {"max_degree", s.max_degree()}, {"threshold", s.threshold_value()}};
    case Sweeper::Kind::null:
        break;
    }
    return {{"kind", "none"}};
}

inline Json to_json(const UnitTaylorModel& m) {
    Json terms = Json::array();
    for (const auto& [a, c] : m.terms()) {
        std::vector<int> alpha;
        for (std::size_t i = 0; i < a.size(); ++i) {
            alpha.push_back(a[i]);
        }
        terms.push_back({{"alpha", alpha}, {"c", c}});
    }
    return {{"args", m.argument_size()}, {"terms", terms}, {"error", m.error()}, {"sweeper", to_json(m.sweeper())}};
}

inline Json to_json(const FunctionPatch& p) {
    Json models = Json::array();
    for (const auto& m : p.models()) {
        models.push_back(to_json(m));
    }
    return {{"domain", to_json(p.domain().sides())}, {"models", models}};
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw UsageError(std::string("JSON object lacks \"") + key + "\"");
    }
    return j.at(key);
}

} // namespace detail

inline ValidatedBounds bounds_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw UsageError("interval must be a [lower, upper] pair");
    }
    return ValidatedBounds(j[0].get<double>(), j[1].get<double>());
}

inline Box box_from_json(const Json& j) {
    if (!j.is_array()) {
        throw UsageError("box must be an array of intervals");
    }
    Box b;
    for (const auto& x : j) {
        b.push_back(bounds_from_json(x));
    }
    return b;
}

inline Sweeper sweeper_from_json(const Json& j) {
    const auto kind = detail::field(j, "kind").get<std::string>();
    if (kind == "threshold") {
        return Sweeper::threshold(detail::field(j, "threshold").get<double>());
    }
    if (kind == "graded") {
        return Sweeper::graded(detail::field(j, "max_degree").get<int>(), detail::field(j, "threshold").get<double>());
    }
    if (kind == "none") {
        return Sweeper::none();
    }
    throw UsageError("unknown sweeper kind \"" + kind + "\"");
}

inline UnitTaylorModel model_from_json(const Json& j) {
    const auto n = detail::field(j, "args").get<std::size_t>();
    const Sweeper sweeper = j.contains("sweeper") ? sweeper_from_json(j.at("sweeper")) : Sweeper();
    std::vector<UnitTaylorModel::Term> terms;
    for (const auto& t : detail::field(j, "terms")) {
        const auto alpha = detail::field(t, "alpha").get<std::vector<int>>();
        if (alpha.size() != n) {
            throw UsageError("term exponent count differs from the argument count");
        }
        MultiIndex a(n);
        for (std::size_t i = 0; i < n; ++i) {
            a.set(i, alpha[i]);
        }
        terms.emplace_back(a, detail::field(t, "c").get<double>());
    }
    return UnitTaylorModel::from_terms(n, std::move(terms), detail::field(j, "error").get<double>(), sweeper, false);
}

inline FunctionPatch patch_from_json(const Json& j) {
    std::vector<UnitTaylorModel> models;
    for (const auto& m : detail::field(j, "models")) {
        models.push_back(model_from_json(m));
    }
    return {BoxDomain(box_from_json(detail::field(j, "domain"))), std::move(models)};
}

} // namespace vcalc

#endif
