// iopp: command-line front end for the IO population protocol verifier.
//
// Exit codes: 0 positive verdict, 1 negative verdict, 2 usage, parse,
// resource or other operational failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "iopp/iopp.hpp"

namespace {

using namespace iopp;

constexpr int kPositive = 0, kNegative = 1, kFailure = 2;

struct Global {
  bool stats = false;
  bool kv = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProtocolFile load_protocol(const std::string& path) {
  try {
    return parse_protocol(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), e.message() + " in " + path);
  }
}

/// Initial set from the file's init-config line, or the simple input mapping.
std::optional<CountingConstraint> initial_set(const ProtocolFile& f) {
  if (f.init_config) {
    const Point pts[] = {*f.init_config};
    return from_finite(f.protocol.size(), pts);
  }
  if (f.protocol.inputs.empty()) throw ProtocolError("protocol has no inputs and no init-config line");
  return std::nullopt;
}

void print_stats(std::ostream& o, const Global& g, const std::string& prefix, const ReachResult& r) {
  if (g.kv)
    o << prefix << "iterations=" << r.iterations << '\n'
      << prefix << "peak_minterms=" << r.peak_minterms << '\n'
      << prefix << "l_norm=" << r.l_norm << '\n'
      << prefix << "u_norm=" << r.u_norm << '\n';
  else
    o << "iterations=" << r.iterations << " minterms=" << r.closure.size() << " peak=" << r.peak_minterms
      << " l_norm=" << r.l_norm << " u_norm=" << r.u_norm << '\n';
}

int cmd_check(const Global& g, const std::string& path) {
  ProtocolFile f = load_protocol(path);
  Decider d(f.protocol, initial_set(f));
  Verdict v = d.well_specified();
  std::cout << (g.kv ? verdict_kv(v, f.protocol, d.normalized(), g.stats)
                     : verdict_text(v, f.protocol, d.normalized(), g.stats));
  return v.positive() ? kPositive : kNegative;
}

int cmd_correct(const Global& g, const std::string& path, const std::string& pred_text) {
  ProtocolFile f = load_protocol(path);
  if (f.protocol.inputs.empty()) throw ProtocolError("correctness needs input variables");
  const CountingConstraint pred = parse_predicate(pred_text, f.protocol);
  Verdict v = check_correct(f.protocol, pred);
  const Normalized norm = normalize(f.protocol);
  std::cout << (g.kv ? verdict_kv(v, f.protocol, norm, g.stats) : verdict_text(v, f.protocol, norm, g.stats));
  return v.positive() ? kPositive : kNegative;
}

int cmd_closure(const Global& g, const std::string& path, const std::string& dir, const std::string& from,
                bool no_normalize, bool raw) {
  ProtocolFile f = load_protocol(path);
  const auto& names = f.protocol.scheme.states();
  CountingConstraint seed = parse_constraint(from, names);
  ProtocolScheme scheme = f.protocol.scheme;
  std::vector<std::string> out_names = names;
  if (!scheme.is_normal_form()) {
    if (no_normalize) throw ProtocolError("--no-normalize needs a protocol in normal form");
    const Normalized norm = normalize(f.protocol);
    seed = norm.lift(seed);
    scheme = norm.protocol.scheme;
    out_names = scheme.states();
  }
  const ReachResult r = dir == "post" ? post_star(seed, scheme) : pre_star(seed, scheme);
  if (g.kv) {
    std::cout << "direction=" << dir << "\nminterms=" << r.closure.size() << '\n';
    for (std::size_t i = 0; i < r.closure.size(); ++i)
      std::cout << "minterm." << i << '=' << serialize(r.closure.minterms()[i]) << '\n';
  } else if (raw) {
    std::cout << serialize(r.closure);
  } else {
    if (r.closure.minterms().empty()) std::cout << "false\n";
    for (const Minterm& m : r.closure) std::cout << expression(m, out_names) << '\n';
  }
  if (g.stats) print_stats(std::cout, g, "stats.", r);
  return kPositive;
}

int cmd_oracle(const Global& g, const std::string& path, Nat max_size, const std::string& pred_text) {
  ProtocolFile f = load_protocol(path);
  const PopulationProtocol& p = f.protocol;
  std::optional<CountingConstraint> pred;
  if (!pred_text.empty()) pred = parse_predicate(pred_text, p);
  const auto init = initial_set(f);
  Decider d(p, init);
  const Normalized& norm = d.normalized();
  const Verdict symbolic = d.well_specified();
  const CountingConstraint w0 = d.stabilizes(0), w1 = d.stabilizes(1);

  bool all_well = true, agree = true, pred_ok = true;
  const auto& names = p.scheme.states();
  std::vector<Nat> sizes;
  if (f.init_config) {
    sizes.push_back(total(*f.init_config));
  } else {
    for (Nat n = 2; n <= max_size; ++n) sizes.push_back(n);
  }
  for (Nat n : sizes) {
    const std::vector<Point> starts = f.init_config ? std::vector<Point>{*f.init_config} : initial_slice(p, n);
    const SizeVerdict sv = well_specified_at_size(p, starts);
    std::size_t mismatches = 0, pred_mismatches = 0;
    for (const auto& [c, value] : sv.values) {
      const Point lifted = norm.lift_point(c);
      std::optional<int> sym;
      if (w0.contains(lifted)) sym = 0;
      if (w1.contains(lifted)) sym = 1;
      if (sym != value) ++mismatches;
      if (pred) {
        Point in;
        for (const InputBinding& b : p.inputs) in.push_back(c[b.state]);
        if (value != (pred->contains(in) ? 1 : 0)) ++pred_mismatches;
      }
    }
    all_well = all_well && sv.well_specified;
    agree = agree && mismatches == 0;
    pred_ok = pred_ok && pred_mismatches == 0;
    if (g.kv) {
      const std::string k = "size." + std::to_string(n) + ".";
      std::cout << k << "initial=" << starts.size() << '\n'
                << k << "well_specified=" << (sv.well_specified ? "true" : "false") << '\n';
      if (sv.witness) std::cout << k << "witness=" << configuration(*sv.witness, names) << '\n';
      std::cout << k << "symbolic_mismatches=" << mismatches << '\n';
      if (pred) std::cout << k << "predicate_mismatches=" << pred_mismatches << '\n';
    } else {
      std::cout << "size " << n << ": " << (sv.well_specified ? "well-specified" : "ill-specified");
      if (sv.witness) std::cout << " witness " << configuration(*sv.witness, names);
      std::cout << " (" << starts.size() << " initial, " << mismatches << " symbolic mismatches";
      if (pred) std::cout << ", " << pred_mismatches << " predicate mismatches";
      std::cout << ")\n";
    }
  }
  const bool consistent = agree && (!symbolic.positive() || all_well);
  if (g.kv) {
    std::cout << "symbolic=" << (symbolic.positive() ? "WELL_SPECIFIED" : "ILL_SPECIFIED") << '\n'
              << "agreement=" << (consistent ? "true" : "false") << '\n';
  } else {
    std::cout << "symbolic verdict: " << kind_name(symbolic.kind) << "; agreement: " << (consistent ? "yes" : "NO") << '\n';
  }
  if (!consistent) return kFailure;
  return all_well && pred_ok ? kPositive : kNegative;
}

int cmd_simulate(const Global& g, const std::string& path, Nat size, std::size_t steps, std::uint64_t seed,
                 const std::vector<std::string>& inputs) {
  ProtocolFile f = load_protocol(path);
  const PopulationProtocol& p = f.protocol;
  Point c0;
  if (!inputs.empty()) {
    std::vector<Nat> per(p.inputs.size(), 0);
    for (const std::string& a : inputs) {
      const auto eq = a.find('=');
      if (eq == std::string::npos) throw Error("--input expects var=count, got '" + a + "'");
      auto idx = p.input_index(a.substr(0, eq));
      if (!idx) throw Error("unknown input variable '" + a.substr(0, eq) + "'");
      per[*idx] = std::stoull(a.substr(eq + 1));
    }
    c0 = p.initial_point(per);
  } else if (f.init_config) {
    c0 = *f.init_config;
  } else {
    if (p.inputs.empty()) throw ProtocolError("protocol has no inputs");
    std::vector<Nat> per(p.inputs.size(), 0);
    per[0] = size;
    c0 = p.initial_point(per);
  }
  const SimulationSummary s = simulate_fair(p, c0, steps, seed);
  const auto& names = p.scheme.states();
  if (g.kv) {
    std::cout << "start=" << configuration(c0, names) << "\nsteps=" << s.steps << "\nlast=" << configuration(s.last, names)
              << "\nfrozen=" << (s.frozen ? "true" : "false") << '\n';
    if (s.stable_entered) std::cout << "stable_at=" << *s.stable_entered << "\nvalue=" << *s.value << '\n';
    else std::cout << "value=none\n";
  } else {
    std::cout << "start " << configuration(c0, names) << "\nsteps " << s.steps << (s.frozen ? " (frozen)" : "")
              << "\nlast " << configuration(s.last, names) << '\n';
    if (s.stable_entered)
      std::cout << "stable " << *s.value << "-consensus from step " << *s.stable_entered << '\n';
    else
      std::cout << (s.graph_known ? "no stable consensus reached\n" : "stability unknown (graph too large)\n");
  }
  return kPositive;
}

int cmd_normalize(const std::string& path) {
  ProtocolFile f = load_protocol(path);
  const Normalized norm = normalize(f.protocol);
  std::optional<Point> init;
  if (f.init_config) init = norm.lift_point(*f.init_config);
  std::cout << print_protocol(norm.protocol, init);
  return kPositive;
}

int cmd_gen_tm(const Global& g, const std::string& path, const std::string& out, const std::string& word_text) {
  TuringMachine tm;
  try {
    tm = parse_tm(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), e.message() + " in " + path);
  }
  const std::vector<std::string> word = word_text.empty() ? tm.input : parse_word(word_text);
  if (word.empty()) throw Error("no input word: pass --word or add an 'input:' line");
  const TmRun run = simulate(tm, word);
  const GeneratedInstance gi = encode_tm(tm, word);
  std::ofstream o(out, std::ios::binary);
  if (!o) throw Error("cannot write '" + out + "'");
  o << "# generated from machine " << tm.name << "; expected "
    << (run.accepted ? "ILL-SPECIFIED (machine accepts)" : "WELL-SPECIFIED (machine rejects)") << '\n';
  o << print_protocol(gi.protocol, gi.initial);
  if (!o) throw Error("write to '" + out + "' failed");
  if (g.kv)
    std::cout << "states=" << gi.protocol.size() << "\ntransitions=" << gi.protocol.scheme.transitions().size()
              << "\nmachine=" << (run.accepted ? "accepts" : "rejects") << "\nsteps=" << run.steps << '\n';
  else
    std::cout << "wrote " << out << ": " << gi.protocol.size() << " states, " << gi.protocol.scheme.transitions().size()
              << " transitions; machine " << (run.accepted ? "accepts" : "rejects") << " in " << run.steps << " steps\n";
  return kPositive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verifier for immediate-observation population protocols"};
  app.require_subcommand(1);
  Global g;
  std::string format = "text";
  app.add_flag("--stats", g.stats, "Print closure diagnostics");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "kv"}));

  std::string file, pred, dir = "post", from, out, word;
  bool no_normalize = false, raw = false;
  Nat max_size = 6, size = 4;
  std::size_t steps = 1000;
  std::uint64_t seed = 1;
  std::vector<std::string> inputs;

  auto* check = app.add_subcommand("check", "Decide well-specification");
  check->add_option("file", file, "Protocol file")->required();
  auto* correct = app.add_subcommand("correct", "Check that the protocol computes a predicate");
  correct->add_option("file", file, "Protocol file")->required();
  correct->add_option("--pred", pred, "Predicate over input variables")->required();
  auto* closure = app.add_subcommand("closure", "Compute post* or pre* of a constraint");
  closure->add_option("file", file, "Protocol file")->required();
  closure->add_option("--dir", dir, "post or pre")->check(CLI::IsMember({"post", "pre"}));
  closure->add_option("--from", from, "Constraint over protocol states")->required();
  closure->add_flag("--no-normalize", no_normalize, "Refuse protocols that are not in normal form");
  closure->add_flag("--raw", raw, "Print the lo..hi serialization");
  auto* oracle = app.add_subcommand("oracle", "Explicit-state verdicts per population size");
  oracle->add_option("file", file, "Protocol file")->required();
  oracle->add_option("--max-size", max_size, "Largest population size")->check(CLI::Range(2, 64));
  oracle->add_option("--pred", pred, "Predicate over input variables");
  auto* sim = app.add_subcommand("simulate", "Random fair run");
  sim->add_option("file", file, "Protocol file")->required();
  sim->add_option("--size", size, "Agents, all in the first input state")->check(CLI::Range(2, 1'000'000));
  sim->add_option("--steps", steps, "Maximum interactions");
  sim->add_option("--seed", seed, "Random seed");
  sim->add_option("--input", inputs, "Initial population as var=count");
  auto* norm = app.add_subcommand("normalize", "Print the normal-form protocol");
  norm->add_option("file", file, "Protocol file")->required();
  auto* gen = app.add_subcommand("gen-tm", "Generate the protocol for a Turing machine and input");
  gen->add_option("tmfile", file, "Machine file")->required();
  gen->add_option("-o,--output", out, "Output protocol file")->required();
  gen->add_option("--word", word, "Input word (default: the file's input line)");
  for (auto* sub : {check, correct, closure, oracle, sim, norm, gen}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kFailure;
  }
  g.kv = format == "kv";

  try {
    if (*check) return cmd_check(g, file);
    if (*correct) return cmd_correct(g, file, pred);
    if (*closure) return cmd_closure(g, file, dir, from, no_normalize, raw);
    if (*oracle) return cmd_oracle(g, file, max_size, pred);
    if (*sim) return cmd_simulate(g, file, size, steps, seed, inputs);
    if (*norm) return cmd_normalize(file);
    if (*gen) return cmd_gen_tm(g, file, out, word);
  } catch (const ResourceError& e) {
    if (g.kv)
      std::cout << "error=resource\nreason=" << e.reason() << "\ndiagnostics=" << e.diagnostics() << '\n';
    std::cerr << "iopp: resource limit: " << e.what() << '\n';
    return kFailure;
  } catch (const ParseError& e) {
    if (g.kv) std::cout << "error=parse\nline=" << e.line() << "\ncolumn=" << e.column() << '\n';
    std::cerr << "iopp: parse error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    if (g.kv) std::cout << "error=failure\n";
    std::cerr << "iopp: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
