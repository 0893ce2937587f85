#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fullgroup/certificate.hpp"
#include "fullgroup/codec.hpp"
#include "fullgroup/decomposition.hpp"
#include "fullgroup/environment.hpp"
#include "fullgroup/trace.hpp"
#include "fullgroup/transfer.hpp"

namespace fullgroup {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// Pretty-printed with sorted keys and a trailing newline; identical values
/// give identical bytes.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json to_json(const ProofTrace& trace) {
    Json out = Json::array();
    for (const auto& e : trace) {
        Json sets = Json::array();
        for (const auto& [name, s] : e.sets) sets.push_back({{"name", name}, {"set", encode(s)}});
        out.push_back({{"step", e.step}, {"note", e.note}, {"sets", std::move(sets)}});
    }
    return out;
}

inline ProofTrace trace_from_json(const Json& j) {
    ProofTrace out;
    for (const auto& e : j) {
        TraceEntry t{e.at("step").get<std::string>(), e.at("note").get<std::string>(), {}};
        for (const auto& s : e.at("sets")) t.sets.emplace_back(s.at("name").get<std::string>(), parse_clopen(s.at("set").get<std::string>()));
        out.push_back(std::move(t));
    }
    return out;
}

template <class B>
Json to_json(const Environment<B>& env) {
    Json out = Json::object();
    for (const auto& [name, e] : env.bindings()) out[name] = encode(e);
    return out;
}

template <class B>
Environment<B> environment_from_json(const Json& j, int base) {
    Environment<B> env(base);
    for (const auto& [name, v] : j.items()) env.bind(name, parse_element<B>(v.template get<std::string>()));
    return env;
}

inline Json to_json(const GroupWord& w) {
    Json out = Json::array();
    for (const auto& t : w.tokens()) out.push_back(t.exponent > 0 ? t.name : t.name + "^-1");
    return out;
}

inline GroupWord word_from_json(const Json& j) {
    std::vector<Token> ts;
    for (const auto& v : j) {
        auto s = v.get<std::string>();
        int e = 1;
        if (s.size() > 3 && s.ends_with("^-1")) {
            e = -1;
            s.resize(s.size() - 3);
        }
        if (s.empty()) throw MalformedInput("empty token in conjugator");
        ts.push_back({s, e});
    }
    return GroupWord(std::move(ts));
}

inline Json to_json(const ConjugateProduct& cp) {
    Json fs = Json::array();
    for (const auto& f : cp.factors) fs.push_back({{"conjugator", to_json(f.conjugator)}, {"sign", f.sign}});
    return {{"generator", cp.generator}, {"factors", std::move(fs)}};
}

inline ConjugateProduct conjugate_product_from_json(const Json& j) {
    ConjugateProduct cp{j.at("generator").get<std::string>(), {}};
    for (const auto& f : j.at("factors")) cp.factors.push_back({word_from_json(f.at("conjugator")), f.at("sign").get<int>()});
    return cp;
}

inline Json header(const char* kind, const BackendId& id) {
    return {{"format_version", kFormatVersion}, {"kind", kind}, {"backend", id.tag()}};
}

template <class B>
Json to_json(const Bisection<B>& u) {
    Json j = header("bisection", u.backend());
    j["witness"] = encode(u);
    return j;
}

template <class B>
Json to_json(const TransferResult<B>& t) {
    Json j = header("transfer", t.element.backend());
    j["a"] = encode(t.a);
    j["b"] = encode(t.b);
    j["element"] = encode(t.element);
    j["tag"] = tag_name(t.tag);
    j["image"] = encode(image_of_clopen(t.element, t.a));
    j["support"] = encode(support(t.element));
    if (t.witness) {
        j["witness"] = t.witness->text();
        j["environment"] = to_json(t.witness_env);
    }
    return j;
}

template <class B>
Json to_json(const GWState<B>& st) {
    Json j = header("gw-state", st.partial.backend());
    j["a"] = encode(st.a);
    j["b"] = encode(st.b);
    j["rounds"] = st.round;
    j["x0"] = st.x0.text();
    j["y0"] = st.y0.text();
    j["residual_a"] = encode(st.residual_a);
    j["residual_b"] = encode(st.residual_b);
    j["partial"] = encode(st.partial);
    Json hist = Json::array();
    for (const auto& h : st.history)
        hist.push_back({{"round", h.n},
                        {"depth", h.depth},
                        {"residual_a", encode(h.residual_a)},
                        {"residual_b", encode(h.residual_b)},
                        {"step", encode(h.step)}});
    j["history"] = std::move(hist);
    return j;
}

template <class B>
Json to_json(const DecompositionResult<B>& d, const Element<B>& input) {
    Json j = header("decomposition", input.backend());
    j["input"] = encode(input);
    Json fs = Json::array(), bs = Json::array();
    for (const auto& f : d.factors) fs.push_back(encode(f));
    for (const auto& b : d.bounds) bs.push_back(encode(b));
    j["factors"] = std::move(fs);
    j["bounds"] = std::move(bs);
    j["epsilon"] = d.epsilon ? Json(d.epsilon->text()) : Json(nullptr);
    return j;
}

template <class B>
Json to_json(const SplitResult<B>& s) {
    Json j = header("split", s.tau1.backend());
    j["tau"] = encode(s.env.get("tau"));
    j["tau1"] = encode(s.tau1);
    j["tau2"] = encode(s.tau2);
    j["a"] = encode(s.a);
    j["a0"] = encode(s.a0);
    j["certificate"] = to_json(s.certificate);
    j["environment"] = to_json(s.env);
    j["witnesses"] = {{"sigma", s.sigma_witness.text()}, {"gamma", s.gamma_witness.text()}};
    j["trace"] = to_json(s.trace);
    return j;
}

/// A certificate file: environment, generator, factors, target and trace.
template <class B>
struct CertificateFile {
    Environment<B> env;
    ConjugateProduct product;
    Element<B> target;
    ProofTrace trace;
};

template <class B>
Json to_json(const CertificateFile<B>& c) {
    Json j = header("certificate", c.env.backend());
    j["environment"] = to_json(c.env);
    const auto cp = to_json(c.product);
    j["generator"] = cp.at("generator");
    j["factors"] = cp.at("factors");
    j["target"] = encode(c.target);
    j["trace"] = to_json(c.trace);
    return j;
}

inline void check_header(const Json& j, const char* kind) {
    if (!j.is_object()) throw MalformedInput("expected a JSON object");
    if (!j.contains("format_version") || j.at("format_version") != kFormatVersion)
        throw MalformedInput("unsupported or missing format_version");
    if (j.value("kind", "") != kind) throw MalformedInput(std::string("expected a ") + kind + " file");
}

template <class B>
CertificateFile<B> certificate_from_json(const Json& j) {
    check_header(j, "certificate");
    const auto id = parse_backend_tag(j.at("backend").get<std::string>() + ":");
    if (id.kind != B::kind) throw MalformedInput("certificate backend mismatch");
    CertificateFile<B> c{environment_from_json<B>(j.at("environment"), id.base),
                         conjugate_product_from_json({{"generator", j.at("generator")}, {"factors", j.at("factors")}}),
                         parse_element<B>(j.at("target").get<std::string>()), trace_from_json(j.at("trace"))};
    if (c.target.base() != id.base) throw MalformedInput("target base differs from the certificate backend");
    return c;
}

/// Parses JSON text, mapping syntax and type errors to MalformedInput.
inline Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw MalformedInput(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace fullgroup
