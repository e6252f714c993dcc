#ifndef VCALC_EXPRESSION_HPP
#define VCALC_EXPRESSION_HPP

#include <cctype>
#include <cstddef>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vcalc/algebra.hpp"
#include "vcalc/errors.hpp"
#include "vcalc/rational.hpp"
#include "vcalc/series.hpp"

namespace vcalc {

// Scalar elementary expression in n arguments; nodes are shared, so a
// collection of expressions forms a DAG.
class Expression {
  public:
    enum class Kind { constant, coordinate, neg, add, sub, mul, div, pow, analytic };

    struct Node {
        Kind kind = Kind::constant;
        ExactRational value;
        std::size_t index = 0;
        int power = 0;
        AnalyticOp op = AnalyticOp::exp;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };
    using NodePtr = std::shared_ptr<const Node>;

    Expression() : Expression(0, constant_node(ExactRational(0))) {}

    static Expression constant(std::size_t n, const ExactRational& q) { return {n, constant_node(q)}; }
    static Expression coordinate(std::size_t n, std::size_t i) {
        if (i >= n) {
            throw UsageError("coordinate index out of range");
        }
        auto node = std::make_shared<Node>();
        node->kind = Kind::coordinate;
        node->index = i;
        return {n, node};
    }

    std::size_t argument_size() const noexcept { return n_; }
    const Node& node() const noexcept { return *node_; }
    const NodePtr& node_ptr() const noexcept { return node_; }

    std::optional<ExactRational> constant_value() const {
        if (node_->kind == Kind::constant) {
            return node_->value;
        }
        return std::nullopt;
    }

    friend Expression operator+(const Expression& a, const Expression& b) { return binary(Kind::add, a, b); }
    friend Expression operator-(const Expression& a, const Expression& b) { return binary(Kind::sub, a, b); }
    friend Expression operator*(const Expression& a, const Expression& b) { return binary(Kind::mul, a, b); }
    friend Expression operator/(const Expression& a, const Expression& b) { return binary(Kind::div, a, b); }
    friend Expression operator-(const Expression& a) {
        if (auto c = a.constant_value()) {
            return constant(a.n_, -*c);
        }
        auto node = std::make_shared<Node>();
        node->kind = Kind::neg;
        node->lhs = a.node_;
        return {a.n_, node};
    }
    friend Expression operator+(const Expression& a, const ExactRational& q) { return a + constant(a.n_, q); }
    friend Expression operator-(const Expression& a, const ExactRational& q) { return a - constant(a.n_, q); }
    friend Expression operator*(const ExactRational& q, const Expression& a) { return constant(a.n_, q) * a; }
    friend Expression operator/(const Expression& a, const ExactRational& q) { return a / constant(a.n_, q); }
    friend Expression operator*(const Expression& a, const ExactRational& q) { return a * constant(a.n_, q); }
    friend Expression operator+(const ExactRational& q, const Expression& a) { return constant(a.n_, q) + a; }
    friend Expression operator-(const ExactRational& q, const Expression& a) { return constant(a.n_, q) - a; }
    friend Expression operator/(const ExactRational& q, const Expression& a) { return constant(a.n_, q) / a; }

    friend Expression pow(const Expression& a, int k) {
        if (k == 0) {
            return constant(a.n_, ExactRational(1));
        }
        if (k == 1) {
            return a;
        }
        if (auto c = a.constant_value(); c && (k > 0 || !c->is_zero())) {
            return constant(a.n_, vcalc::pow(*c, k));
        }
        auto node = std::make_shared<Node>();
        node->kind = Kind::pow;
        node->power = k;
        node->lhs = a.node_;
        return {a.n_, node};
    }
    friend Expression sqr(const Expression& a) { return pow(a, 2); }

    static Expression apply(AnalyticOp op, const Expression& a) {
        if (auto c = a.constant_value()) {
            try {
                return constant(a.n_, apply_op(op, *c));
            } catch (const DomainError&) {
                // not rational; keep symbolic
            }
        }
        auto node = std::make_shared<Node>();
        node->kind = Kind::analytic;
        node->op = op;
        node->lhs = a.node_;
        return {a.n_, node};
    }
    friend Expression exp(const Expression& a) { return apply(AnalyticOp::exp, a); }
    friend Expression log(const Expression& a) { return apply(AnalyticOp::log, a); }
    friend Expression sin(const Expression& a) { return apply(AnalyticOp::sin, a); }
    friend Expression cos(const Expression& a) { return apply(AnalyticOp::cos, a); }
    friend Expression tan(const Expression& a) { return apply(AnalyticOp::tan, a); }
    friend Expression atan(const Expression& a) { return apply(AnalyticOp::atan, a); }
    friend Expression sqrt(const Expression& a) { return apply(AnalyticOp::sqrt, a); }
    friend Expression rec(const Expression& a) { return apply(AnalyticOp::rec, a); }

    template <class A>
    A evaluate(const std::vector<A>& args) const;
    template <class A>
    A evaluate(const std::vector<A>& args, const A& proto) const;

    // Symbolic partial derivative in x_k.
    Expression derivative(std::size_t k) const;

    // Expression with x_i replaced by g_i; all g_i share one argument count.
    Expression substitute(const std::vector<Expression>& g) const;

    std::string str(const std::vector<std::string>& names = {}) const;

  private:
    Expression(std::size_t n, NodePtr node) : n_(n), node_(std::move(node)) {}

    friend class ExpressionFunction;
    template <class A>
    friend class ExpressionEvaluator;

    static NodePtr constant_node(const ExactRational& q) {
        auto node = std::make_shared<Node>();
        node->kind = Kind::constant;
        node->value = q;
        return node;
    }

    static Expression binary(Kind kind, const Expression& a, const Expression& b) {
        if (a.n_ != b.n_) {
            throw UsageError("expressions have different argument counts");
        }
        const auto ca = a.constant_value();
        const auto cb = b.constant_value();
        if (ca && cb) {
            switch (kind) {
            case Kind::add:
                return constant(a.n_, *ca + *cb);
            case Kind::sub:
                return constant(a.n_, *ca - *cb);
            case Kind::mul:
                return constant(a.n_, *ca * *cb);
            case Kind::div:
                if (!cb->is_zero()) {
                    return constant(a.n_, *ca / *cb);
                }
                break;
            default:
                break;
            }
        }
        // identities that keep derivative trees small
        const bool a0 = ca && ca->is_zero();
        const bool b0 = cb && cb->is_zero();
        const bool a1 = ca && *ca == ExactRational(1);
        const bool b1 = cb && *cb == ExactRational(1);
        if (kind == Kind::add && a0) {
            return b;
        }
        if ((kind == Kind::add || kind == Kind::sub) && b0) {
            return a;
        }
        if (kind == Kind::sub && a0) {
            return -b;
        }
        if (kind == Kind::mul && (a0 || b0)) {
            return constant(a.n_, ExactRational(0));
        }
        if (kind == Kind::mul && a1) {
            return b;
        }
        if ((kind == Kind::mul || kind == Kind::div) && b1) {
            return a;
        }
        auto node = std::make_shared<Node>();
        node->kind = kind;
        node->lhs = a.node_;
        node->rhs = b.node_;
        return {a.n_, node};
    }

    std::size_t n_ = 0;
    NodePtr node_;
};

// Structural recursion over the DAG with one memo table, so shared nodes are
// evaluated once.
template <class A>
class ExpressionEvaluator {
  public:
    ExpressionEvaluator(const std::vector<A>& args, const A& proto) : args_(args), proto_(proto) {}

    A operator()(const Expression::NodePtr& p) {
        using std::atan;
        using std::cos;
        using std::exp;
        using std::log;
        using std::pow;
        using std::sin;
        using std::sqrt;
        using std::tan;
        auto it = memo_.find(p.get());
        if (it != memo_.end()) {
            return it->second;
        }
        const Expression::Node& n = *p;
        A r = proto_;
        switch (n.kind) {
        case Expression::Kind::constant:
            r = make_constant(proto_, n.value);
            break;
        case Expression::Kind::coordinate:
            r = args_.at(n.index);
            break;
        case Expression::Kind::neg:
            r = -(*this)(n.lhs);
            break;
        case Expression::Kind::add:
            r = (*this)(n.lhs) + (*this)(n.rhs);
            break;
        case Expression::Kind::sub:
            r = (*this)(n.lhs) - (*this)(n.rhs);
            break;
        case Expression::Kind::mul:
            r = (*this)(n.lhs) * (*this)(n.rhs);
            break;
        case Expression::Kind::div: {
            const A d = (*this)(n.rhs);
            if (AlgebraTraits<A>::is_exact_zero(d)) {
                throw DomainError("division by zero");
            }
            r = (*this)(n.lhs) / d;
            break;
        }
        case Expression::Kind::pow:
            r = pow((*this)(n.lhs), n.power);
            break;
        case Expression::Kind::analytic:
            r = apply_op(n.op, (*this)(n.lhs));
            break;
        }
        memo_.emplace(p.get(), r);
        return r;
    }

  private:
    const std::vector<A>& args_;
    A proto_;
    std::unordered_map<const Expression::Node*, A> memo_;
};

template <class A>
A Expression::evaluate(const std::vector<A>& args, const A& proto) const {
    if (args.size() != n_) {
        throw UsageError("wrong number of arguments for expression");
    }
    ExpressionEvaluator<A> ev(args, proto);
    return ev(node_);
}

template <class A>
A Expression::evaluate(const std::vector<A>& args) const {
    if (args.empty()) {
        throw UsageError("evaluation with no arguments needs a prototype");
    }
    return evaluate(args, args.front());
}

inline Expression Expression::derivative(std::size_t k) const {
    if (k >= n_) {
        throw UsageError("derivative index out of range");
    }
    std::unordered_map<const Node*, Expression> memo;
    const std::size_t n = n_;
    auto wrap = [n](const NodePtr& p) { return Expression(n, p); };
    auto d = [&](auto&& self, const NodePtr& p) -> Expression {
        auto it = memo.find(p.get());
        if (it != memo.end()) {
            return it->second;
        }
        const Node& x = *p;
        Expression r = constant(n, ExactRational(0));
        switch (x.kind) {
        case Kind::constant:
            break;
        case Kind::coordinate:
            r = constant(n, ExactRational(x.index == k ? 1 : 0));
            break;
        case Kind::neg:
            r = -self(self, x.lhs);
            break;
        case Kind::add:
            r = self(self, x.lhs) + self(self, x.rhs);
            break;
        case Kind::sub:
            r = self(self, x.lhs) - self(self, x.rhs);
            break;
        case Kind::mul:
            r = self(self, x.lhs) * wrap(x.rhs) + wrap(x.lhs) * self(self, x.rhs);
            break;
        case Kind::div: {
            const Expression u = wrap(x.lhs);
            const Expression v = wrap(x.rhs);
            r = (self(self, x.lhs) * v - u * self(self, x.rhs)) / pow(v, 2);
            break;
        }
        case Kind::pow:
            r = ExactRational(x.power) * pow(wrap(x.lhs), x.power - 1) * self(self, x.lhs);
            break;
        case Kind::analytic: {
            const Expression u = wrap(x.lhs);
            const Expression du = self(self, x.lhs);
            const Expression one = constant(n, ExactRational(1));
            switch (x.op) {
            case AnalyticOp::exp:
                r = wrap(p) * du;
                break;
            case AnalyticOp::log:
                r = du / u;
                break;
            case AnalyticOp::sin:
                r = cos(u) * du;
                break;
            case AnalyticOp::cos:
                r = -(sin(u) * du);
                break;
            case AnalyticOp::tan:
                r = (one + pow(wrap(p), 2)) * du;
                break;
            case AnalyticOp::atan:
                r = du / (one + pow(u, 2));
                break;
            case AnalyticOp::sqrt:
                r = du / (ExactRational(2) * wrap(p));
                break;
            case AnalyticOp::rec:
                r = -(du * pow(wrap(p), 2));
                break;
            }
            break;
        }
        }
        memo.emplace(p.get(), r);
        return r;
    };
    return d(d, node_);
}

inline Expression Expression::substitute(const std::vector<Expression>& g) const {
    if (g.size() != n_) {
        throw UsageError("substitution needs one expression per argument");
    }
    if (g.empty()) {
        return *this;
    }
    const std::size_t m = g.front().n_;
    for (const auto& e : g) {
        if (e.n_ != m) {
            throw UsageError("substituted expressions have different argument counts");
        }
    }
    std::unordered_map<const Node*, Expression> memo;
    auto wrap = [m](const NodePtr& p) { return Expression(m, p); };
    auto s = [&](auto&& self, const NodePtr& p) -> Expression {
        auto it = memo.find(p.get());
        if (it != memo.end()) {
            return it->second;
        }
        const Node& x = *p;
        Expression r = wrap(p);
        switch (x.kind) {
        case Kind::constant:
            r = constant(m, x.value);
            break;
        case Kind::coordinate:
            r = g[x.index];
            break;
        case Kind::neg:
            r = -self(self, x.lhs);
            break;
        case Kind::add:
        case Kind::sub:
        case Kind::mul:
        case Kind::div:
            r = binary(x.kind, self(self, x.lhs), self(self, x.rhs));
            break;
        case Kind::pow:
            r = pow(self(self, x.lhs), x.power);
            break;
        case Kind::analytic:
            r = apply(x.op, self(self, x.lhs));
            break;
        }
        memo.emplace(p.get(), r);
        return r;
    };
    return s(s, node_);
}

inline std::string Expression::str(const std::vector<std::string>& names) const {
    auto name = [&names](std::size_t i) { return i < names.size() ? names[i] : "x" + std::to_string(i); };
    auto go = [&](auto&& self, const Node& x) -> std::string {
        switch (x.kind) {
        case Kind::constant:
            return x.value.sign() < 0 ? "(" + x.value.str() + ")" : x.value.str();
        case Kind::coordinate:
            return name(x.index);
        case Kind::neg:
            return "(-" + self(self, *x.lhs) + ")";
        case Kind::add:
            return "(" + self(self, *x.lhs) + "+" + self(self, *x.rhs) + ")";
        case Kind::sub:
            return "(" + self(self, *x.lhs) + "-" + self(self, *x.rhs) + ")";
        case Kind::mul:
            return self(self, *x.lhs) + "*" + self(self, *x.rhs);
        case Kind::div:
            return self(self, *x.lhs) + "/" + self(self, *x.rhs);
        case Kind::pow:
            return self(self, *x.lhs) + "^" + (x.power < 0 ? "(" + std::to_string(x.power) + ")" : std::to_string(x.power));
        case Kind::analytic:
            return std::string(to_string(x.op)) + "(" + self(self, *x.lhs) + ")";
        }
        return "?";
    };
    return go(go, *node_);
}

// Vector-valued expression function R^n -> R^m.
class ExpressionFunction {
  public:
    ExpressionFunction() = default;
    ExpressionFunction(std::size_t n, std::vector<Expression> components) : n_(n), components_(std::move(components)) {
        for (const auto& c : components_) {
            if (c.argument_size() != n) {
                throw UsageError("component argument count differs from the function's");
            }
        }
    }

    static ExpressionFunction identity(std::size_t n) {
        std::vector<Expression> c;
        for (std::size_t i = 0; i < n; ++i) {
            c.push_back(Expression::coordinate(n, i));
        }
        return {n, std::move(c)};
    }

    std::size_t argument_size() const noexcept { return n_; }
    std::size_t result_size() const noexcept { return components_.size(); }
    const std::vector<Expression>& components() const noexcept { return components_; }
    const Expression& operator[](std::size_t i) const { return components_.at(i); }

    // All components share one memo table.
    template <class A>
    std::vector<A> evaluate(const std::vector<A>& args, const A& proto) const {
        if (args.size() != n_) {
            throw UsageError("wrong number of arguments for function");
        }
        ExpressionEvaluator<A> ev(args, proto);
        std::vector<A> r;
        r.reserve(components_.size());
        for (const auto& c : components_) {
            r.push_back(ev(c.node_ptr()));
        }
        return r;
    }
    template <class A>
    std::vector<A> evaluate(const std::vector<A>& args) const {
        if (args.empty()) {
            throw UsageError("evaluation with no arguments needs a prototype");
        }
        return evaluate(args, args.front());
    }

    // f o g
    friend ExpressionFunction compose(const ExpressionFunction& f, const ExpressionFunction& g) {
        if (g.result_size() != f.n_) {
            throw UsageError("composition dimension mismatch");
        }
        std::vector<Expression> c;
        for (const auto& e : f.components_) {
            c.push_back(e.substitute(g.components_));
        }
        return {g.n_, std::move(c)};
    }

    // x -> (f1(x), f2(x))
    friend ExpressionFunction join(const ExpressionFunction& f1, const ExpressionFunction& f2) {
        if (f1.n_ != f2.n_) {
            throw UsageError("join needs equal argument counts");
        }
        std::vector<Expression> c = f1.components_;
        c.insert(c.end(), f2.components_.begin(), f2.components_.end());
        return {f1.n_, std::move(c)};
    }

    // (x, y) -> (f1(x), f2(y))
    friend ExpressionFunction combine(const ExpressionFunction& f1, const ExpressionFunction& f2) {
        const std::size_t n = f1.n_ + f2.n_;
        std::vector<Expression> first;
        std::vector<Expression> second;
        for (std::size_t i = 0; i < f1.n_; ++i) {
            first.push_back(Expression::coordinate(n, i));
        }
        for (std::size_t i = 0; i < f2.n_; ++i) {
            second.push_back(Expression::coordinate(n, f1.n_ + i));
        }
        std::vector<Expression> c;
        for (const auto& e : f1.components_) {
            c.push_back(e.substitute(first));
        }
        for (const auto& e : f2.components_) {
            c.push_back(e.substitute(second));
        }
        return {n, std::move(c)};
    }

    // Column k of the Jacobian.
    ExpressionFunction derivative(std::size_t k) const {
        std::vector<Expression> c;
        for (const auto& e : components_) {
            c.push_back(e.derivative(k));
        }
        return {n_, std::move(c)};
    }

    // Jacobian entries row-major, as an n*m-component function.
    ExpressionFunction jacobian() const {
        std::vector<Expression> c;
        for (const auto& e : components_) {
            for (std::size_t k = 0; k < n_; ++k) {
                c.push_back(e.derivative(k));
            }
        }
        return {n_, std::move(c)};
    }

    std::string str(const std::vector<std::string>& names = {}) const {
        std::string s = "[";
        for (std::size_t i = 0; i < components_.size(); ++i) {
            s += (i ? ", " : "") + components_[i].str(names);
        }
        return s + "]";
    }

  private:
    std::size_t n_ = 0;
    std::vector<Expression> components_;
};

// Recursive-descent parser for the expression grammar:
//   sum     := product (('+'|'-') product)*
//   product := unary (('*'|'/') unary)*
//   unary   := ('-'|'+') unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number | name | name '(' sum ')' | '(' sum ')'
// Decimal literals are read exactly as rationals.
class ExpressionParser {
  public:
    explicit ExpressionParser(std::vector<std::string> names) : names_(std::move(names)) {}

    // line and column offsets locate the text inside a larger file.
    Expression parse(std::string_view text, std::size_t line = 1, std::size_t column = 1) const {
        State st{text, 0, line, column};
        skip_space(st);
        Expression e = sum(st);
        skip_space(st);
        if (st.pos != text.size()) {
            fail(st, "unexpected '" + std::string(1, text[st.pos]) + "'");
        }
        return e;
    }

    ExpressionFunction parse_function(const std::vector<std::string>& components) const {
        std::vector<Expression> c;
        for (const auto& s : components) {
            c.push_back(parse(s));
        }
        return {names_.size(), std::move(c)};
    }

  private:
    struct State {
        std::string_view text;
        std::size_t pos;
        std::size_t line;
        std::size_t column;
    };

    [[noreturn]] static void fail(const State& st, const std::string& msg) {
        throw ParseError(msg, st.line, st.column + st.pos);
    }

    static void skip_space(State& st) {
        while (st.pos < st.text.size() && std::isspace(static_cast<unsigned char>(st.text[st.pos]))) {
            ++st.pos;
        }
    }
    static bool accept(State& st, char c) {
        skip_space(st);
        if (st.pos < st.text.size() && st.text[st.pos] == c) {
            ++st.pos;
            return true;
        }
        return false;
    }

    Expression sum(State& st) const {
        Expression e = product(st);
        while (true) {
            if (accept(st, '+')) {
                e = e + product(st);
            } else if (accept(st, '-')) {
                e = e - product(st);
            } else {
                return e;
            }
        }
    }

    Expression product(State& st) const {
        Expression e = unary(st);
        while (true) {
            if (accept(st, '*')) {
                e = e * unary(st);
            } else if (accept(st, '/')) {
                const std::size_t at = st.pos;
                Expression d = unary(st);
                if (auto c = d.constant_value(); c && c->is_zero()) {
                    State where = st;
                    where.pos = at;
                    fail(where, "division by constant zero");
                }
                e = e / d;
            } else {
                return e;
            }
        }
    }

    Expression unary(State& st) const {
        if (accept(st, '-')) {
            return -unary(st);
        }
        if (accept(st, '+')) {
            return unary(st);
        }
        return power(st);
    }

    Expression power(State& st) const {
        Expression base = primary(st);
        if (!accept(st, '^')) {
            return base;
        }
        skip_space(st);
        bool negative = false;
        if (accept(st, '-')) {
            negative = true;
            skip_space(st);
        }
        const std::size_t start = st.pos;
        while (st.pos < st.text.size() && std::isdigit(static_cast<unsigned char>(st.text[st.pos]))) {
            ++st.pos;
        }
        if (start == st.pos) {
            fail(st, "expected an integer exponent");
        }
        if (st.pos - start > 6) {
            State where = st;
            where.pos = start;
            fail(where, "exponent too large");
        }
        const int k = std::stoi(std::string(st.text.substr(start, st.pos - start)));
        return pow(base, negative ? -k : k);
    }

    Expression primary(State& st) const {
        skip_space(st);
        const std::size_t n = names_.size();
        if (st.pos >= st.text.size()) {
            fail(st, "unexpected end of expression");
        }
        const char c = st.text[st.pos];
        if (c == '(') {
            ++st.pos;
            Expression e = sum(st);
            if (!accept(st, ')')) {
                fail(st, "expected ')'");
            }
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::size_t start = st.pos;
            while (st.pos < st.text.size() &&
                   (std::isdigit(static_cast<unsigned char>(st.text[st.pos])) || st.text[st.pos] == '.')) {
                ++st.pos;
            }
            if (st.pos < st.text.size() && (st.text[st.pos] == 'e' || st.text[st.pos] == 'E')) {
                std::size_t p = st.pos + 1;
                if (p < st.text.size() && (st.text[p] == '+' || st.text[p] == '-')) {
                    ++p;
                }
                if (p < st.text.size() && std::isdigit(static_cast<unsigned char>(st.text[p]))) {
                    st.pos = p;
                    while (st.pos < st.text.size() && std::isdigit(static_cast<unsigned char>(st.text[st.pos]))) {
                        ++st.pos;
                    }
                }
            }
            try {
                return Expression::constant(n, ExactRational::parse(st.text.substr(start, st.pos - start)));
            } catch (const std::exception&) {
                State where = st;
                where.pos = start;
                fail(where, "malformed number");
            }
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = st.pos;
            while (st.pos < st.text.size() &&
                   (std::isalnum(static_cast<unsigned char>(st.text[st.pos])) || st.text[st.pos] == '_')) {
                ++st.pos;
            }
            const std::string word(st.text.substr(start, st.pos - start));
            for (std::size_t i = 0; i < n; ++i) {
                if (names_[i] == word) {
                    return Expression::coordinate(n, i);
                }
            }
            static const std::pair<const char*, AnalyticOp> functions[] = {
                {"exp", AnalyticOp::exp},   {"log", AnalyticOp::log},   {"sin", AnalyticOp::sin},
                {"cos", AnalyticOp::cos},   {"tan", AnalyticOp::tan},   {"atan", AnalyticOp::atan},
                {"sqrt", AnalyticOp::sqrt}, {"rec", AnalyticOp::rec},
            };
            for (const auto& [fname, op] : functions) {
                if (word == fname) {
                    if (!accept(st, '(')) {
                        fail(st, "expected '(' after " + word);
                    }
                    Expression arg = sum(st);
                    if (!accept(st, ')')) {
                        fail(st, "expected ')'");
                    }
                    return Expression::apply(op, arg);
                }
            }
            State where = st;
            where.pos = start;
            fail(where, "unknown name '" + word + "'");
        }
        fail(st, "unexpected '" + std::string(1, c) + "'");
    }

    std::vector<std::string> names_;
};

} // namespace vcalc

#endif
