#ifndef VCALC_FUNCTION_PATCH_HPP
#define VCALC_FUNCTION_PATCH_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcalc/bounds.hpp"
#include "vcalc/differential.hpp"
#include "vcalc/errors.hpp"
#include "vcalc/expression.hpp"
#include "vcalc/format.hpp"
#include "vcalc/taylor_model.hpp"

namespace vcalc {

// Coordinate-aligned box with double endpoints; zero-width sides allowed.
class BoxDomain {
  public:
    BoxDomain() = default;
    explicit BoxDomain(std::vector<ValidatedBounds> sides) : sides_(std::move(sides)) {
        for (const auto& s : sides_) {
            if (!std::isfinite(s.lower()) || !std::isfinite(s.upper())) {
                throw DomainError("box sides must be bounded");
            }
        }
    }
    BoxDomain(std::initializer_list<std::pair<double, double>> sides) {
        for (const auto& [a, b] : sides) {
            sides_.emplace_back(a, b);
        }
    }

    std::size_t dimension() const noexcept { return sides_.size(); }
    const ValidatedBounds& operator[](std::size_t i) const { return sides_.at(i); }
    const std::vector<ValidatedBounds>& sides() const noexcept { return sides_; }

    bool contains(const std::vector<ValidatedBounds>& x) const {
        if (x.size() != sides_.size()) {
            return false;
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!x[i].subset_of(sides_[i])) {
                return false;
            }
        }
        return true;
    }
    bool contains(const BoxDomain& b) const { return contains(b.sides_); }

    // Widest side index.
    std::size_t widest() const {
        std::size_t k = 0;
        for (std::size_t i = 1; i < sides_.size(); ++i) {
            if (sides_[i].width() > sides_[k].width()) {
                k = i;
            }
        }
        return k;
    }
    double max_width() const { return sides_.empty() ? 0.0 : sides_[widest()].width(); }

    std::pair<BoxDomain, BoxDomain> bisect(std::size_t j) const {
        const ValidatedBounds& s = sides_.at(j);
        const double m = s.midpoint();
        BoxDomain lo = *this;
        BoxDomain hi = *this;
        lo.sides_[j] = ValidatedBounds(s.lower(), m);
        hi.sides_[j] = ValidatedBounds(m, s.upper());
        return {lo, hi};
    }

    // Cartesian product with extra sides appended.
    BoxDomain product(const BoxDomain& other) const {
        BoxDomain r = *this;
        r.sides_.insert(r.sides_.end(), other.sides_.begin(), other.sides_.end());
        return r;
    }

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < sides_.size(); ++i) {
            s += (i ? "," : "") + std::string("{") + shortest(sides_[i].lower()) + ":" + shortest(sides_[i].upper()) +
                 "}";
        }
        return s + "]";
    }

    friend bool operator==(const BoxDomain&, const BoxDomain&) = default;

  private:
    std::vector<ValidatedBounds> sides_;
};

// Affine bijection s_i(z_i) = c_i + r_i z_i from [-1:+1] onto a box side;
// r_i = 0 maps z_i to the constant c_i.
class ScalingMap {
  public:
    ScalingMap() = default;
    explicit ScalingMap(const BoxDomain& d) {
        for (const auto& s : d.sides()) {
            centres_.push_back(s.midpoint());
            radii_.push_back(s.radius());
        }
    }
    std::size_t dimension() const noexcept { return centres_.size(); }
    double centre(std::size_t i) const { return centres_.at(i); }
    double radius(std::size_t i) const { return radii_.at(i); }

    // s_i^{-1}(x) intersected with [-1:+1].
    ValidatedBounds unscale(const ValidatedBounds& x, std::size_t i) const {
        if (radii_.at(i) == 0) {
            return ValidatedBounds(0.0);
        }
        const ValidatedBounds z = (x - ValidatedBounds(centres_[i])) / ValidatedBounds(radii_[i]);
        const auto clipped = intersection(z, ValidatedBounds(-1.0, 1.0));
        if (!clipped) {
            throw DomainError("point lies outside the scaled domain");
        }
        return *clipped;
    }

  private:
    std::vector<double> centres_;
    std::vector<double> radii_;
};

// Validated vector function on a box: component k is g_k o s^{-1} +/- e_k
// with g_k a unit Taylor model.
class FunctionPatch {
  public:
    FunctionPatch() = default;
    FunctionPatch(BoxDomain domain, std::vector<UnitTaylorModel> models)
        : domain_(std::move(domain)), scaling_(domain_), models_(std::move(models)) {
        for (const auto& m : models_) {
            if (m.argument_size() != domain_.dimension()) {
                throw UsageError("model argument count differs from the domain dimension");
            }
        }
    }

    static FunctionPatch identity(const BoxDomain& d, Sweeper sweeper = Sweeper()) {
        const ScalingMap s(d);
        const std::size_t n = d.dimension();
        std::vector<UnitTaylorModel> m;
        for (std::size_t i = 0; i < n; ++i) {
            m.push_back(UnitTaylorModel::from_terms(
                n, {{MultiIndex(n), s.centre(i)}, {MultiIndex::unit(n, i), s.radius(i)}}, 0.0, sweeper, false));
        }
        return {d, std::move(m)};
    }

    static FunctionPatch constant(const BoxDomain& d, const std::vector<ValidatedBounds>& values,
                                  Sweeper sweeper = Sweeper()) {
        std::vector<UnitTaylorModel> m;
        for (const auto& v : values) {
            m.push_back(UnitTaylorModel::constant(d.dimension(), v, sweeper));
        }
        return {d, std::move(m)};
    }

    // f o id over the identity models on d.
    static FunctionPatch from_function(const ExpressionFunction& f, const BoxDomain& d, Sweeper sweeper = Sweeper()) {
        if (f.argument_size() != d.dimension()) {
            throw UsageError("function argument count differs from the domain dimension");
        }
        const FunctionPatch id = identity(d, sweeper);
        return {d, f.evaluate(id.models_, UnitTaylorModel::constant(d.dimension(), 0.0, sweeper))};
    }

    const BoxDomain& domain() const noexcept { return domain_; }
    const ScalingMap& scaling() const noexcept { return scaling_; }
    const std::vector<UnitTaylorModel>& models() const noexcept { return models_; }
    std::size_t argument_size() const noexcept { return domain_.dimension(); }
    std::size_t result_size() const noexcept { return models_.size(); }
    const UnitTaylorModel& model(std::size_t k) const { return models_.at(k); }

    FunctionPatch component(std::size_t k) const { return {domain_, {models_.at(k)}}; }

    std::vector<double> errors() const {
        std::vector<double> e;
        for (const auto& m : models_) {
            e.push_back(m.error());
        }
        return e;
    }

    std::vector<ValidatedBounds> range() const {
        std::vector<ValidatedBounds> r;
        for (const auto& m : models_) {
            r.push_back(m.range());
        }
        return r;
    }
    std::vector<ValidatedBounds> sharp_range() const {
        std::vector<ValidatedBounds> r;
        for (const auto& m : models_) {
            r.push_back(m.sharp_range());
        }
        return r;
    }

    // Unit-box coordinates of a subset of the domain.
    std::vector<ValidatedBounds> unscale(const std::vector<ValidatedBounds>& x) const {
        if (x.size() != domain_.dimension()) {
            throw UsageError("wrong number of arguments for patch evaluation");
        }
        if (!domain_.contains(x)) {
            throw DomainError("patch evaluated outside its domain");
        }
        std::vector<ValidatedBounds> z;
        for (std::size_t i = 0; i < x.size(); ++i) {
            z.push_back(scaling_.unscale(x[i], i));
        }
        return z;
    }

    std::vector<ValidatedBounds> evaluate(const std::vector<ValidatedBounds>& x) const {
        const auto z = unscale(x);
        std::vector<ValidatedBounds> r;
        for (const auto& m : models_) {
            r.push_back(m.evaluate(z));
        }
        return r;
    }

    // x -> f(patch(x)) for an expression f.
    FunctionPatch apply(const ExpressionFunction& f) const {
        if (f.argument_size() != result_size()) {
            throw UsageError("function argument count differs from the patch result count");
        }
        const Sweeper s = models_.empty() ? Sweeper() : models_.front().sweeper();
        return {domain_, f.evaluate(models_, UnitTaylorModel::constant(domain_.dimension(), 0.0, s))};
    }

    // outer o inner; the inner range must lie in the outer domain.
    friend FunctionPatch compose(const FunctionPatch& outer, const FunctionPatch& inner) {
        if (inner.result_size() != outer.argument_size()) {
            throw UsageError("composition dimension mismatch");
        }
        std::vector<UnitTaylorModel> z;
        for (std::size_t i = 0; i < inner.result_size(); ++i) {
            const UnitTaylorModel& g = inner.models_[i];
            const double c = outer.scaling_.centre(i);
            const double r = outer.scaling_.radius(i);
            // the outer model is valid on [c - r, c + r], which contains its side
            const ValidatedBounds valid(rounding::sub_up(c, r), rounding::add_down(c, r));
            if (!g.range().subset_of(hull(valid, outer.domain_[i]))) {
                throw DomainError("inner patch range escapes the outer domain");
            }
            if (r == 0) {
                z.push_back(UnitTaylorModel::constant(g.argument_size(), 0.0, g.sweeper()));
            } else {
                z.push_back((g - ValidatedBounds(c)) * rec(ValidatedBounds(r)));
            }
        }
        std::vector<UnitTaylorModel> m;
        for (const auto& f : outer.models_) {
            m.push_back(UnitTaylorModel::compose_within_unit_box(f, z));
        }
        return {inner.domain_, std::move(m)};
    }

    // Antiderivative in x_j vanishing at x_j = centre of side j.
    FunctionPatch antiderivative(std::size_t j) const {
        check_index(j);
        std::vector<UnitTaylorModel> m;
        for (const auto& g : models_) {
            m.push_back(g.antiderivative(j, scaling_.radius(j)));
        }
        return {domain_, std::move(m)};
    }

    // Antiderivative in x_j vanishing at x_j = base.
    FunctionPatch antiderivative(std::size_t j, double base) const {
        check_index(j);
        if (!domain_[j].contains(base)) {
            throw DomainError("base point outside the domain");
        }
        const ValidatedBounds zb = scaling_.unscale(ValidatedBounds(base), j);
        std::vector<UnitTaylorModel> m;
        for (const auto& g : models_) {
            const UnitTaylorModel a = g.antiderivative(j, scaling_.radius(j));
            m.push_back(a - a.substitute(j, zb));
        }
        return {domain_, std::move(m)};
    }

    FunctionPatch derivative_of_midpoint(std::size_t j) const {
        check_index(j);
        std::vector<UnitTaylorModel> m;
        for (const auto& g : models_) {
            m.push_back(g.derivative_of_midpoint(j, scaling_.radius(j)));
        }
        return {domain_, std::move(m)};
    }

    // Restriction to a subbox.
    FunctionPatch restrict(const BoxDomain& sub) const {
        if (!domain_.contains(sub)) {
            throw DomainError("restriction box is not inside the domain");
        }
        std::vector<UnitTaylorModel> m = models_;
        const ScalingMap sub_scaling(sub);
        for (std::size_t j = 0; j < sub.dimension(); ++j) {
            if (sub[j] == domain_[j] || scaling_.radius(j) == 0) {
                continue;
            }
            // new z_j' in [-1,1] maps to old z_j = a z_j' + b enclosing the subside
            const ValidatedBounds a =
                ValidatedBounds(sub_scaling.radius(j)) / ValidatedBounds(scaling_.radius(j));
            const ValidatedBounds b = (ValidatedBounds(sub_scaling.centre(j)) - ValidatedBounds(scaling_.centre(j))) /
                                      ValidatedBounds(scaling_.radius(j));
            for (auto& g : m) {
                g = g.affine_precompose(j, a, b);
            }
        }
        return {sub, std::move(m)};
    }

    std::pair<FunctionPatch, FunctionPatch> split(std::size_t j) const {
        check_index(j);
        const auto [lo, hi] = domain_.bisect(j);
        return {restrict(lo), restrict(hi)};
    }

    // The patch with x_j fixed to v, as a function of the other arguments.
    FunctionPatch slice(std::size_t j, double v) const {
        check_index(j);
        if (!domain_[j].contains(v)) {
            throw DomainError("slice value outside the domain");
        }
        const ValidatedBounds z = scaling_.unscale(ValidatedBounds(v), j);
        std::vector<ValidatedBounds> sides = domain_.sides();
        sides.erase(sides.begin() + static_cast<std::ptrdiff_t>(j));
        const std::size_t n = domain_.dimension();
        std::vector<UnitTaylorModel> m;
        for (const auto& g : models_) {
            const UnitTaylorModel fixed = g.substitute(j, z);
            std::vector<UnitTaylorModel::Term> terms;
            for (const auto& [a, c] : fixed.terms()) {
                terms.emplace_back(a.without(j), c);
            }
            m.push_back(UnitTaylorModel::from_terms(n - 1, std::move(terms), fixed.error(), fixed.sweeper(), false));
        }
        return {BoxDomain(std::move(sides)), std::move(m)};
    }

    // Same functions viewed on domain x extra (new arguments last).
    FunctionPatch extend(const BoxDomain& extra) const {
        std::vector<UnitTaylorModel> m;
        for (const auto& g : models_) {
            m.push_back(g.extend(extra.dimension()));
        }
        return {domain_.product(extra), std::move(m)};
    }

    friend FunctionPatch join(const FunctionPatch& a, const FunctionPatch& b) {
        if (!(a.domain_ == b.domain_)) {
            throw UsageError("join needs equal domains");
        }
        std::vector<UnitTaylorModel> m = a.models_;
        m.insert(m.end(), b.models_.begin(), b.models_.end());
        return {a.domain_, std::move(m)};
    }

    // Componentwise sufficient refinement test on equal domains.
    friend bool refines(const FunctionPatch& a, const FunctionPatch& b) {
        if (!(a.domain_ == b.domain_) || a.result_size() != b.result_size()) {
            return false;
        }
        for (std::size_t k = 0; k < a.result_size(); ++k) {
            if (!refines(a.models_[k], b.models_[k])) {
                return false;
            }
        }
        return true;
    }

    // Coefficients of component k as an exact polynomial in the original
    // (non-centred) coordinates; the error is not included.
    Differential<ExactRational> polynomial(std::size_t k) const {
        const UnitTaylorModel& g = models_.at(k);
        const std::size_t n = domain_.dimension();
        const int d = std::max(g.degree(), 1);
        using DQ = Differential<ExactRational>;
        std::vector<DQ> z;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = scaling_.radius(i);
            if (r == 0) {
                z.push_back(DQ::constant(n, d, ExactRational(0)));
            } else {
                const DQ x = DQ::variable(n, d, ExactRational(0), i);
                z.push_back((x - ExactRational::from_double(scaling_.centre(i))) *
                            DQ::constant(n, d, ExactRational(1) / ExactRational::from_double(r)));
            }
        }
        return g.horner_over(z, DQ::constant(n, d, ExactRational(0)), [n, d](double c) {
            return DQ::constant(n, d, ExactRational::from_double(c));
        });
    }

    // "VectorScaledFunctionPatch(dom=..., rng=..., [ {...}, ... ])" with each
    // component shown as a polynomial in the original coordinates.
    std::string str() const {
        std::string s = "VectorScaledFunctionPatch(\n    dom=" + domain_.str() + ",\n    rng=[";
        const auto rng = range();
        for (std::size_t k = 0; k < rng.size(); ++k) {
            s += (k ? "," : "") + render_braced(rng[k], 8);
        }
        s += "],\n    [ ";
        for (std::size_t k = 0; k < models_.size(); ++k) {
            s += (k ? ",\n      " : "") + polynomial_text(k);
        }
        return s + " ]  )";
    }

  private:
    void check_index(std::size_t j) const {
        if (j >= domain_.dimension()) {
            throw UsageError("variable index out of range");
        }
    }

    std::string polynomial_text(std::size_t k) const {
        const auto p = polynomial(k);
        std::string s = "{";
        bool first = true;
        const auto& terms = p.terms();
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
            const auto& [a, c] = *it;
            if (c.is_zero()) {
                continue;
            }
            const std::string v = significant(c.to_double(RoundingMode::nearest), 4);
            s += " " + ((first || v.front() == '-') ? v : "+" + v);
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] > 0) {
                    s += "*x" + std::to_string(i);
                    if (a[i] > 1) {
                        s += "^" + std::to_string(a[i]);
                    }
                }
            }
            first = false;
        }
        if (first) {
            s += " 0.0";
        }
        return s + "+/-" + significant(models_[k].error(), 3, RoundingMode::up) + "}";
    }

    BoxDomain domain_;
    ScalingMap scaling_;
    std::vector<UnitTaylorModel> models_;
};

} // namespace vcalc

#endif
