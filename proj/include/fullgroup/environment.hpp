#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fullgroup/element.hpp"
#include "fullgroup/error.hpp"

namespace fullgroup {

struct Token {
    std::string name;
    int exponent = 1;  // +1 or -1

    Token inverse() const { return {name, -exponent}; }

    friend bool operator==(const Token&, const Token&) = default;
    friend auto operator<=>(const Token&, const Token&) = default;
};

/// A word in named group elements, evaluated left to right as a product
/// (the rightmost letter acts first on points).
class GroupWord {
public:
    GroupWord() = default;
    explicit GroupWord(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    static GroupWord letter(std::string name, int exponent = 1) { return GroupWord({Token{std::move(name), exponent}}); }

    /// a b a^-1 b^-1
    static GroupWord commutator(const std::string& a, const std::string& b) {
        return GroupWord({{a, 1}, {b, 1}, {a, -1}, {b, -1}});
    }

    const std::vector<Token>& tokens() const { return tokens_; }
    std::size_t size() const { return tokens_.size(); }
    bool empty() const { return tokens_.empty(); }

    GroupWord inverse() const {
        std::vector<Token> out;
        out.reserve(tokens_.size());
        for (auto it = tokens_.rbegin(); it != tokens_.rend(); ++it) out.push_back(it->inverse());
        return GroupWord(std::move(out));
    }

    GroupWord& operator*=(const GroupWord& o) {
        tokens_.insert(tokens_.end(), o.tokens_.begin(), o.tokens_.end());
        return *this;
    }
    friend GroupWord operator*(GroupWord a, const GroupWord& b) { return a *= b; }

    /// "a*b^-1*c"; the empty word is "1".
    std::string text() const {
        if (tokens_.empty()) return "1";
        std::string out;
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            if (i) out += '*';
            out += tokens_[i].name;
            if (tokens_[i].exponent < 0) out += "^-1";
        }
        return out;
    }

    static GroupWord parse(std::string_view s) {
        GroupWord w;
        if (s == "1" || s.empty()) return w;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            auto star = s.find('*', pos);
            auto part = s.substr(pos, star == std::string_view::npos ? std::string_view::npos : star - pos);
            int e = 1;
            if (part.ends_with("^-1")) {
                e = -1;
                part.remove_suffix(3);
            }
            if (part.empty()) throw MalformedInput("empty letter in group word '" + std::string(s) + "'");
            w.tokens_.push_back({std::string(part), e});
            if (star == std::string_view::npos) break;
            pos = star + 1;
        }
        return w;
    }

    friend bool operator==(const GroupWord&, const GroupWord&) = default;

private:
    std::vector<Token> tokens_;
};

/// Finite map from names to elements of a single backend and base.
template <class B>
class Environment {
public:
    explicit Environment(int base = 2) : base_(base) { check_base(base); }

    int base() const { return base_; }
    BackendId backend() const { return {B::kind, base_}; }

    void bind(const std::string& name, Element<B> e) {
        if (name.empty()) throw MalformedInput("empty element name");
        if (e.base() != base_)
            throw MalformedInput("element '" + name + "' has base " + std::to_string(e.base()) +
                                 ", environment has base " + std::to_string(base_));
        bindings_.insert_or_assign(name, std::move(e));
    }

    bool contains(const std::string& name) const { return bindings_.count(name) != 0; }

    const Element<B>& get(const std::string& name) const {
        auto it = bindings_.find(name);
        if (it == bindings_.end()) throw MalformedInput("unresolved name '" + name + "'");
        return it->second;
    }

    const std::map<std::string, Element<B>>& bindings() const { return bindings_; }

private:
    int base_;
    std::map<std::string, Element<B>> bindings_;
};

template <class B>
Element<B> evaluate(const GroupWord& w, const Environment<B>& env) {
    Element<B> acc = Element<B>::identity(env.base());
    for (const auto& t : w.tokens()) {
        const auto& e = env.get(t.name);
        acc = compose(acc, t.exponent > 0 ? e : inverse(e));
    }
    return acc;
}

/// Constructive membership in the derived subgroup: a product of
/// commutators [x_i, y_i] of named elements. Empty means the identity.
struct DerivedWitness {
    std::vector<std::pair<std::string, std::string>> commutators;

    GroupWord word() const {
        GroupWord w;
        for (const auto& [a, b] : commutators) w *= GroupWord::commutator(a, b);
        return w;
    }

    /// "[a,b]*[c,d]"; "1" when empty.
    std::string text() const {
        if (commutators.empty()) return "1";
        std::string out;
        for (std::size_t i = 0; i < commutators.size(); ++i) {
            if (i) out += '*';
            out += "[" + commutators[i].first + "," + commutators[i].second + "]";
        }
        return out;
    }

    static DerivedWitness parse(std::string_view s) {
        DerivedWitness w;
        if (s == "1" || s.empty()) return w;
        std::size_t pos = 0;
        while (pos < s.size()) {
            if (s[pos] != '[') throw MalformedInput("witness must be a product of [a,b] leaves: '" + std::string(s) + "'");
            auto comma = s.find(',', pos);
            auto close = s.find(']', pos);
            if (comma == std::string_view::npos || close == std::string_view::npos || comma > close)
                throw MalformedInput("bad commutator leaf in '" + std::string(s) + "'");
            w.commutators.emplace_back(std::string(s.substr(pos + 1, comma - pos - 1)),
                                       std::string(s.substr(comma + 1, close - comma - 1)));
            pos = close + 1;
            if (pos < s.size()) {
                if (s[pos] != '*') throw MalformedInput("expected '*' between witness leaves");
                ++pos;
            }
        }
        return w;
    }

    friend bool operator==(const DerivedWitness&, const DerivedWitness&) = default;
};

template <class B>
Element<B> evaluate(const DerivedWitness& w, const Environment<B>& env) {
    Element<B> acc = Element<B>::identity(env.base());
    for (const auto& [a, b] : w.commutators) acc = compose(acc, commutator(env.get(a), env.get(b)));
    return acc;
}

/// [f, g] for two named elements together with its one-leaf witness.
template <class B>
std::pair<Element<B>, DerivedWitness> commutator(const Environment<B>& env, const std::string& f, const std::string& g) {
    return {commutator(env.get(f), env.get(g)), DerivedWitness{{{f, g}}}};
}

struct ConjugateFactor {
    GroupWord conjugator;
    int sign = 1;

    friend bool operator==(const ConjugateFactor&, const ConjugateFactor&) = default;
};

/// prod_i g_i * generator^(s_i) * g_i^-1 over a named generator: a witness
/// of membership in the normal closure of the generator.
struct ConjugateProduct {
    std::string generator;
    std::vector<ConjugateFactor> factors;

    bool empty() const { return factors.empty(); }

    /// The product with every conjugator prefixed by g, i.e. g * this * g^-1.
    ConjugateProduct conjugated_by(const GroupWord& g) const {
        ConjugateProduct out{generator, {}};
        out.factors.reserve(factors.size());
        for (const auto& f : factors) out.factors.push_back({g * f.conjugator, f.sign});
        return out;
    }

    ConjugateProduct inverse() const {
        ConjugateProduct out{generator, {}};
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) out.factors.push_back({it->conjugator, -it->sign});
        return out;
    }

    ConjugateProduct& operator*=(const ConjugateProduct& o) {
        if (!o.factors.empty() && o.generator != generator)
            throw MalformedInput("conjugate products over different generators");
        factors.insert(factors.end(), o.factors.begin(), o.factors.end());
        return *this;
    }

    /// The flat word g_1 t^s_1 g_1^-1 g_2 t^s_2 g_2^-1 ...
    GroupWord flatten() const {
        GroupWord w;
        for (const auto& f : factors) {
            w *= f.conjugator;
            w *= GroupWord::letter(generator, f.sign);
            w *= f.conjugator.inverse();
        }
        return w;
    }

    friend bool operator==(const ConjugateProduct&, const ConjugateProduct&) = default;
};

/// Parses a flat word back into blocks g t^(+-1) g^-1 with g free of the
/// generator t. Returns the number of blocks, or -1 when some occurrence of
/// t is not conjugated in that form.
inline long scan_conjugate_form(const GroupWord& flat, const std::string& generator) {
    const auto& t = flat.tokens();
    std::size_t i = 0;
    long blocks = 0;
    while (i < t.size()) {
        std::size_t j = i;
        while (j < t.size() && t[j].name != generator) ++j;
        if (j == t.size()) return -1;
        std::size_t len = j - i;
        if (j + 1 + len > t.size()) return -1;
        for (std::size_t k = 0; k < len; ++k)
            if (!(t[j + 1 + k] == t[j - 1 - k].inverse())) return -1;
        i = j + 1 + len;
        ++blocks;
    }
    return blocks;
}

/// Evaluates words and conjugate products over an environment, caching
/// inverses of letters. A run of consecutive factors whose conjugators share
/// a first letter t is evaluated as t * (run with t stripped) * t^-1, so
/// certificates whose conjugators share long prefixes cost a few
/// compositions per distinct prefix rather than per factor.
template <class B>
class WordEvaluator {
public:
    explicit WordEvaluator(const Environment<B>& env) : env_(env) {}

    const Element<B>& letter(const Token& t) {
        if (t.exponent > 0) return env_.get(t.name);
        auto it = inverses_.find(t.name);
        if (it == inverses_.end()) it = inverses_.emplace(t.name, inverse(env_.get(t.name))).first;
        return it->second;
    }

    Element<B> operator()(const GroupWord& w) {
        Element<B> acc = Element<B>::identity(env_.base());
        for (const auto& t : w.tokens()) acc = compose(acc, letter(t));
        return acc;
    }

    Element<B> operator()(const ConjugateProduct& cp) {
        if (cp.factors.empty()) return Element<B>::identity(env_.base());
        const Token gen{cp.generator, 1};
        letter(gen);
        letter(gen.inverse());
        return run(cp, gen, 0, cp.factors.size(), 0);
    }

private:
    Element<B> run(const ConjugateProduct& cp, const Token& gen, std::size_t lo, std::size_t hi, std::size_t depth) {
        Element<B> acc = Element<B>::identity(env_.base());
        std::size_t i = lo;
        while (i < hi) {
            const auto& ts = cp.factors[i].conjugator.tokens();
            if (ts.size() == depth) {
                acc = compose(acc, letter(cp.factors[i].sign > 0 ? gen : gen.inverse()));
                ++i;
                continue;
            }
            const Token t = ts[depth];
            std::size_t j = i + 1;
            while (j < hi && cp.factors[j].conjugator.size() > depth && cp.factors[j].conjugator.tokens()[depth] == t) ++j;
            Element<B> inner = run(cp, gen, i, j, depth + 1);
            if (!inner.is_identity()) acc = compose(acc, compose(compose(letter(t), inner), letter(t.inverse())));
            i = j;
        }
        return acc;
    }

    const Environment<B>& env_;
    std::map<std::string, Element<B>> inverses_;
};

template <class B>
Element<B> evaluate(const ConjugateProduct& cp, const Environment<B>& env) {
    WordEvaluator<B> ev(env);
    return ev(cp);
}

}  // namespace fullgroup
