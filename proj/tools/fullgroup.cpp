// Command-line front end: witness synthesis, certificates and self-tests.
//
// Exit codes: 0 success, 1 precondition violation, 2 malformed input,
// 3 verification failure, 4 internal error.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fullgroup/fullgroup.hpp"

namespace fg = fullgroup;

namespace {

struct Options {
    std::string backend = "odo";
    int base = 2;
    std::uint64_t seed = 1;
    std::size_t max_depth = 4;
    std::size_t trials = 100;
    std::string out;
};

using Summary = std::vector<std::pair<std::string, std::string>>;

void print_summary(const std::string& title, const Summary& rows) {
    std::size_t w = 0;
    for (const auto& [k, v] : rows) w = std::max(w, k.size());
    std::cerr << title << "\n";
    for (const auto& [k, v] : rows) std::cerr << "  " << std::left << std::setw(static_cast<int>(w)) << k << "  " << v << "\n";
}

void emit(const Options& o, const fg::Json& j) {
    const auto text = fg::dump(j);
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    f << text;
}

fg::BackendKind backend_kind(const std::string& name) {
    if (name.starts_with("odo")) return fg::BackendKind::Odometer;
    if (name.starts_with("shift")) return fg::BackendKind::FullShift;
    throw fg::MalformedInput("unknown backend '" + name + "' (use odo or shift)");
}

/// "odo", "shift3", ...: kind plus optional base overriding --base.
fg::BackendId backend_id(const Options& o) {
    auto kind = backend_kind(o.backend);
    auto digits = o.backend.substr(kind == fg::BackendKind::Odometer ? 3 : 5);
    int base = o.base;
    if (!digits.empty()) base = fg::detail::parse_int(digits, "base");
    fg::check_base(base);
    return {kind, base};
}

template <class F>
int dispatch(fg::BackendKind kind, F&& f) {
    if (kind == fg::BackendKind::Odometer) return f(fg::Odometer{});
    return f(fg::FullShift{});
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw fg::MalformedInput("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::pair<fg::ClopenSet, fg::ClopenSet> parse_pair(const std::string& a, const std::string& b) {
    auto x = fg::parse_clopen(a);
    auto y = fg::parse_clopen(b);
    if (x.base() != y.base()) throw fg::MalformedInput("A and B have different bases");
    return {x, y};
}

int cmd_compare(const Options& o, const std::string& a, const std::string& b) {
    auto [x, y] = parse_pair(a, b);
    return dispatch(backend_kind(o.backend), [&](auto tag) {
        using B = decltype(tag);
        auto u = fg::compare_clopen<B>(x, y);
        if (auto bad = fg::validate_bisection(u)) throw fg::VerificationFailure(bad->describe());
        auto j = fg::to_json(u);
        j["a"] = fg::encode(x);
        j["b"] = fg::encode(y);
        j["range"] = fg::encode(fg::source_range(u).second);
        emit(o, j);
        print_summary("compare", {{"A", fg::encode(x)}, {"B", fg::encode(y)}, {"witness", fg::encode(u)}});
        return 0;
    });
}

int cmd_transfer(const Options& o, const std::string& a, const std::string& b, bool comm) {
    auto [x, y] = parse_pair(a, b);
    return dispatch(backend_kind(o.backend), [&](auto tag) {
        using B = decltype(tag);
        auto t = comm ? fg::commutator_transfer<B>(x, y) : fg::full_group_transfer<B>(x, y);
        auto rep = fg::check_postconditions(t);
        if (!rep.ok()) throw fg::VerificationFailure(rep.failures.front());
        emit(o, fg::to_json(t));
        Summary s{{"A", fg::encode(x)}, {"B", fg::encode(y)}, {"element", fg::encode(t.element)}, {"tag", fg::tag_name(t.tag)}};
        if (t.witness) s.emplace_back("witness", t.witness->text());
        print_summary(comm ? "commutator transfer" : "transfer", s);
        return 0;
    });
}

int cmd_swap(const Options& o, const std::string& a, const std::string& b) {
    auto [x, y] = parse_pair(a, b);
    return dispatch(backend_kind(o.backend), [&](auto tag) {
        using B = decltype(tag);
        auto s = fg::exact_swap_involution<B>(x, y);
        if (!(fg::image_of_clopen(s, x) == y) || !fg::compose(s, s).is_identity())
            throw fg::VerificationFailure("swap postconditions");
        fg::Json j = fg::header("swap", s.backend());
        j["a"] = fg::encode(x);
        j["b"] = fg::encode(y);
        j["element"] = fg::encode(s);
        j["support"] = fg::encode(fg::support(s));
        emit(o, j);
        print_summary("swap", {{"A", fg::encode(x)}, {"B", fg::encode(y)}, {"element", fg::encode(s)}});
        return 0;
    });
}

int cmd_gw(const Options& o, const std::string& a, const std::string& b, int rounds) {
    auto [x, y] = parse_pair(a, b);
    return dispatch(backend_kind(o.backend), [&](auto tag) {
        using B = decltype(tag);
        auto st = fg::gw_intertwining<B>(x, y, rounds);
        auto rep = fg::check_gw_state(st);
        if (!rep.ok()) throw fg::VerificationFailure(rep.failures.front());
        emit(o, fg::to_json(st));
        print_summary("intertwining", {{"rounds", std::to_string(st.round)},
                                       {"x0", st.x0.text()},
                                       {"y0", st.y0.text()},
                                       {"residual A", fg::encode(st.residual_a)},
                                       {"residual B", fg::encode(st.residual_b)}});
        return 0;
    });
}

int cmd_decompose(const Options& o, const std::string& elem, const std::string& eps) {
    return dispatch(fg::parse_backend_tag(elem).kind, [&](auto tag) {
        using B = decltype(tag);
        auto f = fg::parse_element<B>(elem);
        std::optional<fg::Rational> e;
        if constexpr (fg::is_odometer<B>) {
            if (eps.empty()) throw fg::MalformedInput("--eps is required on the odometer");
            e = fg::Rational::parse(eps);
        }
        auto d = fg::decompose_small_support(f, e);
        if (!(fg::product(d.factors, f.base()) == f)) throw fg::VerificationFailure("decomposition product");
        emit(o, fg::to_json(d, f));
        print_summary("decompose", {{"input", fg::encode(f)}, {"factors", std::to_string(d.factors.size())},
                                    {"epsilon", e ? e->text() : "-"}});
        return 0;
    });
}

int cmd_split(const Options& o, const std::string& elem) {
    return dispatch(fg::parse_backend_tag(elem).kind, [&](auto tag) {
        using B = decltype(tag);
        auto tau = fg::parse_element<B>(elem);
        auto s = fg::split_nontrivial_support(tau);
        if (!(fg::compose(s.tau1, s.tau2) == tau) || !fg::verify_certificate(s.certificate, s.env, s.tau1))
            throw fg::VerificationFailure("split postconditions");
        emit(o, fg::to_json(s));
        print_summary("split", {{"tau", fg::encode(tau)},
                                {"tau1", fg::encode(s.tau1)},
                                {"tau2", fg::encode(s.tau2)},
                                {"supp tau1", fg::encode(fg::support(s.tau1))},
                                {"supp tau2", fg::encode(fg::support(s.tau2))}});
        return 0;
    });
}

int cmd_certify(const Options& o, const std::string& tau0, const std::string& alpha, const std::string& beta) {
    const auto id = fg::parse_backend_tag(tau0);
    if (!(fg::parse_backend_tag(alpha) == id) || !(fg::parse_backend_tag(beta) == id))
        throw fg::MalformedInput("tau0, alpha and beta must share a backend");
    return dispatch(id.kind, [&](auto tag) {
        using B = decltype(tag);
        fg::Environment<B> env(id.base);
        env.bind("tau0", fg::parse_element<B>(tau0));
        env.bind("alpha", fg::parse_element<B>(alpha));
        env.bind("beta", fg::parse_element<B>(beta));
        auto cert = fg::simplicity_certificate<B>("tau0", {{"alpha", "beta"}}, env);
        const auto target = fg::commutator(env.get("alpha"), env.get("beta"));
        auto rep = fg::verify_certificate_report(cert.product, env, target);
        if (!rep.ok()) throw fg::VerificationFailure(rep.reason);
        fg::CertificateFile<B> file{env, cert.product, target, cert.trace};
        emit(o, fg::to_json(file));
        print_summary("certificate", {{"generator", "tau0"},
                                      {"target", fg::encode(target)},
                                      {"factors", std::to_string(cert.product.factors.size())},
                                      {"atomic pairs", std::to_string(cert.atomic_pairs)},
                                      {"verified", "yes"}});
        return 0;
    });
}

int cmd_verify(const Options& o, const std::string& path) {
    const auto text = read_file(path);
    const auto j = fg::parse_json(text);
    fg::check_header(j, "certificate");
    const auto id = fg::parse_backend_tag(j.at("backend").get<std::string>() + ":");
    return dispatch(id.kind, [&](auto tag) {
        using B = decltype(tag);
        auto file = fg::certificate_from_json<B>(j);
        auto rep = fg::verify_certificate_report(file.product, file.env, file.target);
        fg::Json out = fg::header("verification", id);
        out["certificate"] = path;
        out["factors"] = rep.factors;
        out["structural"] = rep.structural;
        out["equal"] = rep.equal;
        out["ok"] = rep.ok();
        out["reason"] = rep.reason;
        out["canonical_bytes"] = fg::dump(fg::to_json(file)) == text;
        emit(o, out);
        print_summary("verify", {{"file", path},
                                 {"factors", std::to_string(rep.factors)},
                                 {"structural", rep.structural ? "pass" : "FAIL"},
                                 {"evaluation", rep.equal ? "pass" : "FAIL"}});
        return rep.ok() ? 0 : 3;
    });
}

int cmd_selftest(const Options& o, const std::string& suite) {
    fg::RunConfig cfg{backend_id(o), o.seed, o.max_depth, o.trials};
    auto rep = fg::selftest(suite, cfg);
    emit(o, rep.to_json());
    Summary s;
    for (const auto& p : rep.properties)
        s.emplace_back(p.name, std::to_string(p.passed) + "/" + std::to_string(p.trials) + (p.vacuous ? " (vacuous)" : ""));
    print_summary("selftest " + suite + " [" + cfg.backend.tag() + ", seed " + std::to_string(cfg.seed) + "]", s);
    return rep.ok() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbolic calculus for topological full groups of the odometer and full-shift groupoids"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--backend", o.backend, "odo or shift, optionally with base (odo3)");
    app.add_option("--base", o.base, "alphabet size for selftest")->check(CLI::Range(fg::kMinBase, fg::kMaxBase));
    app.add_option("--seed", o.seed, "random seed (FULLGROUP_SEED overrides)");
    app.add_option("--max-depth", o.max_depth, "maximal cylinder depth of random inputs");
    app.add_option("--trials", o.trials, "trials per property");
    app.add_option("-o,--out", o.out, "write JSON here instead of stdout");

    std::string a, b, elem, eps, tau0, alpha, beta, path, suite;
    bool comm = false;
    int rounds = 1;

    auto* compare = app.add_subcommand("compare", "bisection with source A and range inside B");
    compare->add_option("A", a)->required();
    compare->add_option("B", b)->required();
    auto* transfer = app.add_subcommand("transfer", "element moving A into B");
    transfer->add_option("A", a)->required();
    transfer->add_option("B", b)->required();
    transfer->add_flag("--commutator", comm, "synthesize inside the derived subgroup");
    auto* swap = app.add_subcommand("swap", "involution exchanging A and B exactly");
    swap->add_option("A", a)->required();
    swap->add_option("B", b)->required();
    auto* gw = app.add_subcommand("gw", "truncated intertwining of A \\ B and B \\ A");
    gw->add_option("A", a)->required();
    gw->add_option("B", b)->required();
    gw->add_option("--rounds", rounds)->required();
    auto* decompose = app.add_subcommand("decompose", "factor an element into small-support elements");
    decompose->add_option("ELEM", elem)->required();
    decompose->add_option("--eps", eps, "rational bound, e.g. 1/8 (odometer)");
    auto* split = app.add_subcommand("split", "write an element as a product of two with proper supports");
    split->add_option("ELEM", elem)->required();
    auto* certify = app.add_subcommand("certify", "certificate for [alpha, beta] in the normal closure of tau0");
    certify->add_option("--tau0", tau0)->required();
    certify->add_option("--alpha", alpha)->required();
    certify->add_option("--beta", beta)->required();
    auto* verify = app.add_subcommand("verify", "check a certificate file");
    verify->add_option("CERTFILE", path)->required();
    auto* selftest = app.add_subcommand("selftest", "run a randomized property suite");
    selftest->add_option("--suite", suite)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (const char* env = std::getenv("FULLGROUP_SEED")) {
        try {
            o.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: FULLGROUP_SEED is not an integer\n";
            return 2;
        }
    }

    try {
        if (*compare) return cmd_compare(o, a, b);
        if (*transfer) return cmd_transfer(o, a, b, comm);
        if (*swap) return cmd_swap(o, a, b);
        if (*gw) return cmd_gw(o, a, b, rounds);
        if (*decompose) return cmd_decompose(o, elem, eps);
        if (*split) return cmd_split(o, elem);
        if (*certify) return cmd_certify(o, tau0, alpha, beta);
        if (*verify) return cmd_verify(o, path);
        if (*selftest) return cmd_selftest(o, suite);
    } catch (const fg::PreconditionViolation& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 1;
    } catch (const fg::MalformedInput& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return 2;
    } catch (const fg::Json::exception& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return 2;
    } catch (const fg::VerificationFailure& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
