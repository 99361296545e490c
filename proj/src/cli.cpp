#include "coverwalk/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "coverwalk/acceptance.hpp"
#include "coverwalk/chain.hpp"
#include "coverwalk/concentration.hpp"
#include "coverwalk/decompose.hpp"
#include "coverwalk/dynamics.hpp"
#include "coverwalk/errors.hpp"
#include "coverwalk/functional.hpp"
#include "coverwalk/json_io.hpp"
#include "coverwalk/measure.hpp"
#include "coverwalk/negdep.hpp"

namespace coverwalk {
namespace {

// Option storage shared by every leaf subcommand. CLI11 binds into these
// fields; each runner reads the ones its command declared.
struct Opts {
    std::string measure_file;
    std::string spec_inline;
    std::string walk = "mcmc"; // mcmc | bases-exchange | synthesize | FILE
    std::string target = "lambda";
    std::string mode = "full";
    std::string assign_inline;
    std::string observable_file;
    std::string start_state;
    double epsilon = 0.25;
    double rate_a = 0, rate_b = 0;
    double alpha = 0;   // conc herbst override
    double constant = 0; // mixing bound override
    double pi_x = 0;
    std::uint64_t seed = 0;
    int coordinate = 0;
    int restarts = 32;
    long samples = 10000;
    bool store_couplings = false;
    std::vector<int> criteria;
};

// What a runner produced: the report document plus whether every
// mathematical check inside it passed (false maps to exit code 1).
struct Outcome {
    Json doc;
    bool math_ok = true;
};

BooleanMeasure need_measure(const Opts& o) {
    if (!o.measure_file.empty()) return load_measure(o.measure_file);
    if (!o.spec_inline.empty())
        return measure_from_json(parse_json(o.spec_inline, "--spec"));
    throw InputError("no measure given; pass --measure FILE");
}

bool walk_is_builtin(const std::string& w) {
    return w == "mcmc" || w == "bases-exchange" || w == "synthesize";
}

// Resolve --walk. Built-in names derive the walk from the measure; anything
// else is read as a generator document carrying its own measure (a --measure
// passed alongside is ignored with a note).
Generator resolve_walk(const Opts& o, std::ostream& err) {
    if (!walk_is_builtin(o.walk)) {
        if (!o.measure_file.empty())
            err << "note: --walk names a generator file; --measure "
                << o.measure_file << " is ignored in favor of its support\n";
        return load_generator(o.walk);
    }
    BooleanMeasure m = need_measure(o);
    if (o.walk == "mcmc") return build_mcmc(m);
    if (o.walk == "bases-exchange") return build_bases_exchange(m);
    SynthesisResult s = synthesize_flip_swap(m);
    if (!s.normalized)
        throw DomainError("the synthesized walk is identically zero");
    return *s.normalized;
}

Target parse_target(const std::string& t) {
    if (t == "lambda") return Target::Lambda;
    if (t == "alpha") return Target::Alpha;
    if (t == "rho") return Target::Rho;
    throw InputError("unknown --target '" + t + "' (lambda, alpha or rho)");
}

// Start state for dynamics commands: an explicit bit-string, or the lightest
// support state (ties to the smallest in support order) when none was given.
int resolve_start(const BooleanMeasure& m, const std::string& s) {
    if (!s.empty()) {
        BitVector x = BitVector::from_string(s);
        if (x.n() != m.dim())
            throw InputError("--start has " + std::to_string(x.n()) +
                             " coordinates, the measure has " + std::to_string(m.dim()));
        int i = m.index_of(x);
        if (i < 0) throw InputError("--start " + s + " is not a support state");
        return i;
    }
    int best = 0;
    for (int i = 1; i < static_cast<int>(m.support().size()); ++i)
        if (m.weight(i) < m.weight(best)) best = i;
    return best;
}

std::map<int, int> parse_assignment(const std::string& text, int n) {
    Json doc = parse_json(text, "--assign");
    if (!doc.is_object() || doc.empty())
        throw InputError("--assign wants a non-empty object {\"coordinate\": bit}");
    std::map<int, int> assignment;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        int coord = 0;
        try {
            size_t used = 0;
            coord = std::stoi(it.key(), &used);
            if (used != it.key().size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw InputError("--assign key '" + it.key() + "' is not a coordinate");
        }
        if (coord < 1 || coord > n)
            throw InputError("--assign coordinate " + std::to_string(coord) +
                             " outside 1.." + std::to_string(n));
        if (!it.value().is_number_integer())
            throw InputError("--assign value for coordinate " + it.key() +
                             " must be 0 or 1");
        int bit = it.value().get<int>();
        if (bit != 0 && bit != 1)
            throw InputError("--assign value for coordinate " + it.key() +
                             " must be 0 or 1");
        assignment[coord] = bit;
    }
    return assignment;
}

// ---- runners ----------------------------------------------------------------

Outcome run_measure_build(const Opts& o) {
    return {measure_to_json(need_measure(o)), true};
}

Outcome run_measure_condition(const Opts& o) {
    BooleanMeasure m = need_measure(o);
    if (o.assign_inline.empty())
        throw InputError("measure condition wants --assign '{\"coordinate\": bit, ...}'");
    return {condition_to_json(condition(m, parse_assignment(o.assign_inline, m.dim()))), true};
}

Outcome run_measure_split(const Opts& o) {
    BooleanMeasure m = need_measure(o);
    if (o.coordinate < 1 || o.coordinate > m.dim())
        throw InputError("measure split wants --coordinate in 1.." +
                         std::to_string(m.dim()));
    return {split_to_json(split(m, o.coordinate)), true};
}

Outcome run_scp_check(const Opts& o) {
    BooleanMeasure m = need_measure(o);
    ScpOptions opts;
    if (o.mode == "full")
        opts.mode = ScpMode::Full;
    else if (o.mode == "sampled")
        opts.mode = ScpMode::Sampled;
    else
        throw InputError("unknown --mode '" + o.mode + "' (full or sampled)");
    opts.seed = o.seed;
    opts.samples = o.samples;
    opts.store_couplings = o.store_couplings;
    SCPReport r = check_scp(m, opts);
    return {scp_to_json(r), r.holds};
}

Outcome run_walk_build(const Opts& o, const std::string& which) {
    BooleanMeasure m = need_measure(o);
    Generator g = which == "mcmc" ? build_mcmc(m) : build_bases_exchange(m);
    Json doc = generator_to_json(g);
    doc["stats"] = stats_to_json(validate(g));
    return {std::move(doc), true};
}

Outcome run_walk_synthesize(const Opts& o) {
    return {synthesis_to_json(synthesize_flip_swap(need_measure(o))), true};
}

Outcome run_constants_exact(const Opts& o, std::ostream& err) {
    return {estimate_to_json(poincare_exact(resolve_walk(o, err))), true};
}

Outcome run_constants_estimate(const Opts& o, std::ostream& err) {
    SobolevKind kind;
    if (o.target == "alpha")
        kind = SobolevKind::Mlsi;
    else if (o.target == "rho")
        kind = SobolevKind::Lsi;
    else if (o.target == "lambda")
        throw InputError("lambda has an exact routine; use `constants exact`");
    else
        throw InputError("unknown --target '" + o.target + "' (alpha or rho)");
    EstimateOptions opts;
    opts.restarts = o.restarts;
    opts.seed = o.seed;
    return {estimate_to_json(sobolev_estimate(resolve_walk(o, err), kind, opts)), true};
}

Outcome run_constants_two_state(const Opts& o) {
    return {two_state_to_json(two_state_constants(o.rate_a, o.rate_b)), true};
}

Outcome run_constants_certify(const Opts& o, std::ostream& err) {
    Certificate c = certify_main(resolve_walk(o, err), parse_target(o.target));
    return {certificate_to_json(c), c.valid};
}

Outcome run_mixing_time(const Opts& o, std::ostream& err) {
    Generator g = resolve_walk(o, err);
    MixingReport r =
        mixing_report(g, resolve_start(g.measure(), o.start_state), o.epsilon);
    return {mixing_to_json(r), !r.violation};
}

Outcome run_mixing_bound(const Opts& o, std::ostream& err) {
    BoundKind kind;
    if (o.target == "lambda")
        kind = BoundKind::Pi;
    else if (o.target == "alpha")
        kind = BoundKind::Mlsi;
    else
        throw InputError("mixing bound wants --target lambda or alpha");

    double constant = o.constant;
    double pi_x = o.pi_x;
    std::string provenance;
    if (constant > 0) {
        // Fully explicit form: both numbers on the command line.
        if (!(pi_x > 0 && pi_x < 1))
            throw InputError("--constant needs --pi-x in (0, 1)");
        provenance = "explicit";
    } else {
        Generator g = resolve_walk(o, err);
        int start = resolve_start(g.measure(), o.start_state);
        pi_x = g.measure().weight(start);
        if (kind == BoundKind::Pi) {
            constant = poincare_exact(g).value;
            provenance = "exact";
        } else {
            Certificate c = certify_main(g, Target::Alpha);
            if (!c.valid || !(c.claimed_bound > 0))
                throw InputError("no usable certificate for alpha; pass --constant");
            constant = c.claimed_bound;
            provenance = "certificate";
        }
    }
    BoundReport b = mixing_bound(kind, constant, pi_x, o.epsilon);
    Json doc;
    doc["kind"] = kind == BoundKind::Pi ? "pi" : "mlsi";
    doc["target"] = o.target;
    doc["provenance"] = provenance;
    doc["constant"] = json_number(constant);
    doc["pi_x"] = json_number(pi_x);
    doc["epsilon"] = json_number(o.epsilon);
    doc["value"] = json_number(b.value);
    doc["floored"] = b.floored;
    return {std::move(doc), true};
}

Outcome run_conc_herbst(const Opts& o, std::ostream& err) {
    Generator g = resolve_walk(o, err);
    if (o.observable_file.empty())
        throw InputError("conc herbst wants --observable FILE");
    Observable f = observable_from_json(load_json(o.observable_file), g.measure());
    double alpha = o.alpha;
    if (!(alpha > 0)) {
        Certificate c = certify_main(g, Target::Alpha);
        if (!c.valid || !(c.claimed_bound > 0))
            throw InputError("no usable certificate for alpha; pass --alpha");
        alpha = c.claimed_bound;
    }
    TailReport r = herbst_check(g, f, alpha);
    return {tail_to_json(r), r.all_pass};
}

Outcome run_conc_pp(const Opts& o) {
    BooleanMeasure m = need_measure(o);
    if (o.observable_file.empty())
        throw InputError("conc pp wants --observable FILE");
    Observable f = observable_from_json(load_json(o.observable_file), m);
    TailReport r = pemantle_peres_check(m, f);
    return {tail_to_json(r), r.all_pass};
}

Outcome run_suite_cmd(const Opts& o) {
    SuiteResult r = run_suite(o.criteria, o.seed);
    return {suite_to_json(r), r.all_pass};
}

// ---- pretty rendering --------------------------------------------------------

// Indented key/value rendering of a report for the terminal. Purely
// informational: it goes to stderr and never affects the exit code.
void pretty(const Json& v, const std::string& key, int depth, std::ostream& os) {
    std::string pad(static_cast<size_t>(depth) * 2, ' ');
    if (v.is_object()) {
        if (!key.empty()) os << pad << key << ":\n";
        for (auto it = v.begin(); it != v.end(); ++it)
            pretty(it.value(), it.key(), depth + (key.empty() ? 0 : 1), os);
        return;
    }
    if (v.is_array()) {
        bool scalars = std::all_of(v.begin(), v.end(),
                                   [](const Json& e) { return e.is_primitive(); });
        if (scalars && v.size() <= 12) {
            os << pad << key << ": ";
            for (size_t i = 0; i < v.size(); ++i)
                os << (i ? ", " : "") << v[i].dump();
            os << "\n";
            return;
        }
        os << pad << key << ": " << v.size() << " entries\n";
        if (!scalars)
            for (size_t i = 0; i < v.size(); ++i)
                pretty(v[i], "[" + std::to_string(i) + "]", depth + 1, os);
        return;
    }
    os << pad << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
       << "\n";
}

}  // namespace

CommandResult dispatch(const std::vector<std::string>& args) {
    Opts o;
    bool want_pretty = false;
    std::ostringstream out, err;
    std::function<Outcome()> run;

    CLI::App app{"functional inequalities for reversible walks on the boolean lattice"};
    app.name("coverwalk");
    app.require_subcommand(1);

    auto add_measure = [&](CLI::App* cmd) {
        cmd->add_option("--measure", o.measure_file, "measure document (JSON file)");
    };
    auto add_walk = [&](CLI::App* cmd) {
        add_measure(cmd);
        cmd->add_option("--walk", o.walk,
                        "mcmc | bases-exchange | synthesize | generator file")
            ->capture_default_str();
    };
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_flag("--pretty", want_pretty, "render the report to stderr as a table");
        cmd->add_option("--seed", o.seed, "seed for randomized routines")
            ->capture_default_str();
    };

    // measure build | condition | split
    auto* measure = app.add_subcommand("measure", "build and transform measures");
    measure->require_subcommand(1);
    auto* mb = measure->add_subcommand("build", "normalize a measure to its explicit form");
    add_measure(mb);
    mb->add_option("--spec", o.spec_inline, "inline measure document (JSON text)");
    add_common(mb);
    mb->callback([&] { run = [&] { return run_measure_build(o); }; });

    auto* mc = measure->add_subcommand("condition", "pin coordinates to fixed bits");
    add_measure(mc);
    mc->add_option("--assign", o.assign_inline, "assignment, e.g. '{\"1\": 1, \"3\": 0}'");
    add_common(mc);
    mc->callback([&] { run = [&] { return run_measure_condition(o); }; });

    auto* ms = measure->add_subcommand("split", "two-block decomposition at a coordinate");
    add_measure(ms);
    ms->add_option("--coordinate", o.coordinate, "split coordinate (1-based)");
    add_common(ms);
    ms->callback([&] { run = [&] { return run_measure_split(o); }; });

    // scp check
    auto* scp = app.add_subcommand("scp", "stochastic covering property");
    scp->require_subcommand(1);
    auto* sc = scp->add_subcommand("check", "decide the covering property, with witness");
    add_measure(sc);
    sc->add_option("--mode", o.mode, "full | sampled")->capture_default_str();
    sc->add_option("--samples", o.samples, "pair count in sampled mode")
        ->capture_default_str();
    sc->add_flag("--store-couplings", o.store_couplings,
                 "embed the verified couplings in the report");
    add_common(sc);
    sc->callback([&] { run = [&] { return run_scp_check(o); }; });

    // walk mcmc | bases-exchange | synthesize
    auto* walk = app.add_subcommand("walk", "construct reversible walks");
    walk->require_subcommand(1);
    auto* wm = walk->add_subcommand("mcmc", "Metropolis flip/swap walk");
    add_measure(wm);
    add_common(wm);
    wm->callback([&] { run = [&] { return run_walk_build(o, "mcmc"); }; });

    auto* wb = walk->add_subcommand("bases-exchange", "uniform exchange walk");
    add_measure(wb);
    add_common(wb);
    wb->callback([&] { run = [&] { return run_walk_build(o, "bases-exchange"); }; });

    auto* ws = walk->add_subcommand("synthesize",
                                    "assemble a flip/swap walk from the split recursion");
    add_measure(ws);
    add_common(ws);
    ws->callback([&] { run = [&] { return run_walk_synthesize(o); }; });

    // constants exact | estimate | two-state | certify
    auto* constants = app.add_subcommand("constants", "functional-inequality constants");
    constants->require_subcommand(1);
    auto* ce = constants->add_subcommand("exact", "spectral gap by dense eigensolve");
    add_walk(ce);
    add_common(ce);
    ce->callback([&] { run = [&] { return run_constants_exact(o, err); }; });

    auto* cs = constants->add_subcommand("estimate",
                                         "variational upper estimate for alpha or rho");
    add_walk(cs);
    cs->add_option("--target", o.target, "alpha | rho");
    cs->add_option("--restarts", o.restarts, "multi-start count")->capture_default_str();
    add_common(cs);
    cs->callback([&] { run = [&] { return run_constants_estimate(o, err); }; });

    auto* ct = constants->add_subcommand("two-state", "closed forms for a two-state chain");
    ct->add_option("--a", o.rate_a, "rate 0 -> 1")->required();
    ct->add_option("--b", o.rate_b, "rate 1 -> 0")->required();
    add_common(ct);
    ct->callback([&] { run = [&] { return run_constants_two_state(o); }; });

    auto* cc = constants->add_subcommand("certify",
                                         "recursive lower-bound certificate");
    add_walk(cc);
    cc->add_option("--target", o.target, "lambda | alpha | rho")->capture_default_str();
    add_common(cc);
    cc->callback([&] { run = [&] { return run_constants_certify(o, err); }; });

    // mixing time | bound
    auto* mixing = app.add_subcommand("mixing", "mixing times and bounds");
    mixing->require_subcommand(1);
    auto* mt = mixing->add_subcommand("time",
                                      "measured mixing time against certified bounds");
    add_walk(mt);
    mt->add_option("--start", o.start_state, "start state bit-string (default: lightest)");
    mt->add_option("--epsilon", o.epsilon, "total-variation threshold")
        ->capture_default_str();
    add_common(mt);
    mt->callback([&] { run = [&] { return run_mixing_time(o, err); }; });

    auto* mbd = mixing->add_subcommand("bound", "evaluate one mixing-time bound");
    add_walk(mbd);
    mbd->add_option("--target", o.target, "lambda (spectral) | alpha (mlsi)")
        ->capture_default_str();
    mbd->add_option("--start", o.start_state, "start state bit-string (default: lightest)");
    mbd->add_option("--epsilon", o.epsilon, "total-variation threshold")
        ->capture_default_str();
    mbd->add_option("--constant", o.constant, "use this lower bound instead of deriving one");
    mbd->add_option("--pi-x", o.pi_x, "start-state mass (with --constant)");
    add_common(mbd);
    mbd->callback([&] { run = [&] { return run_mixing_bound(o, err); }; });

    // conc herbst | pp
    auto* conc = app.add_subcommand("conc", "concentration inequalities");
    conc->require_subcommand(1);
    auto* ch = conc->add_subcommand("herbst", "sub-Gaussian tails from an mlsi bound");
    add_walk(ch);
    ch->add_option("--observable", o.observable_file, "observable document (JSON file)");
    ch->add_option("--alpha", o.alpha, "mlsi lower bound (default: from the certificate)");
    add_common(ch);
    ch->callback([&] { run = [&] { return run_conc_herbst(o, err); }; });

    auto* cp = conc->add_subcommand("pp", "Lipschitz tails on homogeneous measures");
    add_measure(cp);
    cp->add_option("--observable", o.observable_file, "observable document (JSON file)");
    add_common(cp);
    cp->callback([&] { run = [&] { return run_conc_pp(o); }; });

    // suite run
    auto* suite = app.add_subcommand("suite", "built-in evaluation suite");
    suite->require_subcommand(1);
    auto* sr = suite->add_subcommand("run", "run the numbered acceptance criteria");
    sr->add_option("--criteria", o.criteria, "criterion ids (default: all)")
        ->delimiter(',');
    add_common(sr);
    sr->callback([&] { run = [&] { return run_suite_cmd(o); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        // CLI11's own exit codes are local detail; the interface promises
        // 0 for help and 2 for anything malformed.
        return {code == 0 ? 0 : 2, out.str(), err.str()};
    } catch (const Error& e) {
        // Input errors thrown while a subcommand callback validated eagerly.
        err << "error: " << e.what() << "\n";
        return {2, out.str(), err.str()};
    }

    try {
        Outcome r = run();
        out << dump_report(r.doc);
        if (want_pretty) pretty(r.doc, "", 0, err);
        return {r.math_ok ? 0 : 1, out.str(), err.str()};
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return {2, out.str(), err.str()};
    }
}

}  // namespace coverwalk
