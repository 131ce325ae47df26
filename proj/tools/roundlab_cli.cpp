// roundlab command-line driver. Everything goes through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "roundlab/roundlab.h"

namespace {

using nlohmann::json;

struct Failure {
  int code;
  std::string message;
};

void check(rl_status s) {
  if (s != RL_OK) throw Failure{static_cast<int>(s), rl_last_error()};
}

[[noreturn]] void bad_input(const std::string& message) { throw Failure{RL_INVALID_INPUT, message}; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_input("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool file_exists(const std::string& path) { return static_cast<bool>(std::ifstream(path)); }

// RAII holders for the C handles.
struct GraphHandle {
  rl_graph* g = nullptr;
  ~GraphHandle() { rl_graph_free(g); }
};

struct ResultHandle {
  rl_result* r = nullptr;
  ~ResultHandle() { rl_result_free(r); }
  json parsed() const { return json::parse(rl_result_json(r)); }
};

// A file path, or family:a[:b] such as clique:4 or grid:3:3.
void open_graph(const std::string& spec, std::uint64_t seed, GraphHandle& h) {
  if (spec.empty()) bad_input("--graph is required");
  if (!file_exists(spec) && spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) bad_input("graph spec must be family:a[:b]");
    int a = 0, b = 0;
    try {
      a = std::stoi(parts[1]);
      b = parts.size() == 3 ? std::stoi(parts[2]) : 0;
    } catch (const std::exception&) {
      bad_input("graph spec parameters must be integers");
    }
    check(rl_graph_generate(parts[0].c_str(), a, b, seed, &h.g));
    return;
  }
  check(rl_graph_load(spec.c_str(), &h.g));
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + '"';
}

// One row of the fixed bound CSV for a computed quantity with no run.
std::string bound_csv(const std::string& instance, int k, const std::string& n, const std::string& kind,
                      const std::string& bound, std::uint64_t seed) {
  return "instance,k,n,bound_kind,bound,rounds,ratio,seed\n" + csv_cell(instance) + "," + std::to_string(k) + "," +
         n + "," + kind + "," + bound + ",,," + std::to_string(seed) + "\n";
}

std::string number_text(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"roundlab: round complexity bounds and protocols on CONGEST networks"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // global flags may follow the subcommand

  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out_path;
  app.add_option("--seed", seed, "Random seed, echoed in every output")->capture_default_str();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", out_path, "Write output to this file instead of stdout");

  std::string graph, protocol, inputs_path, circuit_path, transcript_path, reduction, family, variant,
      instance_path, mode = "greedy", function = "disj", instance_name;
  int a = -1, b = -1, delta = 1, max_rounds = 0, k = 2, m = 1, tau = 1, repeats = 1, fa = 1, fb = 0;
  std::int64_t n = 1;
  double nprime = 1;

  auto add_graph = [&](CLI::App* c) {
    c->add_option("--graph", graph, "Graph file (edge list or JSON) or family:a[:b]")->required();
  };

  auto* tau_route = app.add_subcommand("tau-route", "Fewest rounds for a to ship n' bits to b");
  add_graph(tau_route);
  tau_route->add_option("--a", a, "Source vertex")->required();
  tau_route->add_option("--b", b, "Sink vertex")->required();
  tau_route->add_option("--nprime", nprime, "Bits to ship")->required();

  auto* tau_mcf = app.add_subcommand("tau-mcf", "Fewest rounds for the uniform n'/k multicommodity flow");
  add_graph(tau_mcf);
  tau_mcf->add_option("--nprime", nprime, "Per-terminal volume n'")->required();

  auto* st_pack = app.add_subcommand("st-pack", "Pack Steiner trees of terminal diameter at most delta");
  add_graph(st_pack);
  st_pack->add_option("--delta", delta, "Diameter bound")->required();
  st_pack->add_option("--mode", mode, "greedy or sample")->check(CLI::IsMember({"greedy", "sample"}));

  auto* disj_bound = app.add_subcommand("disj-bound", "min over delta of n/ST(G,K,delta) + delta");
  add_graph(disj_bound);
  disj_bound->add_option("--n", n, "Input length")->required();

  auto* embed = app.add_subcommand("embed-expander", "Cut-matching expander embedding over the terminals");
  add_graph(embed);
  embed->add_option("--tau", tau, "Rounds per embedded edge")->required();
  embed->add_option("--nprime", nprime, "Volume n'")->required();

  auto* run = app.add_subcommand("run", "Simulate a protocol on given inputs");
  add_graph(run);
  run->add_option("--protocol", protocol, "forward, disj, cover, parity-majority or ed")->required();
  run->add_option("--inputs", inputs_path, "JSON array of per-terminal bit strings")->required();
  run->add_option("--max-rounds", max_rounds, "Round limit (0 keeps the protocol's own)");
  run->add_option("--transcript", transcript_path, "Write the transcript, one 'round from to bit' line per bit");

  auto* compile = app.add_subcommand("compile", "Compile a leveled circuit into a CONGEST protocol");
  add_graph(compile);
  compile->add_option("--circuit", circuit_path, "Circuit JSON {k, n, levels, outputs}")->required();
  compile->add_option("--inputs", inputs_path, "Optional inputs to run the compiled protocol on");

  auto* ed_circuit = app.add_subcommand("ed-circuit", "Element distinctness circuit for k inputs of m bits");
  ed_circuit->add_option("--k", k, "Players")->required();
  ed_circuit->add_option("--m", m, "Bits per input")->required();

  auto* gen = app.add_subcommand("gen", "Generate a graph or a distributed reduction instance");
  gen->add_option("--reduction", reduction, "or-disj or and-disj")->check(CLI::IsMember({"or-disj", "and-disj"}));
  gen->add_option("--family", family, "clique, path, cycle, grid, parallel, star, ring-of-cliques, random");
  gen->add_option("--k", k, "Players (reduction)");
  gen->add_option("--n", n, "String length (reduction)");
  gen->add_option("--a", fa, "First family parameter");
  gen->add_option("--b", fb, "Second family parameter");

  auto* solve = app.add_subcommand("solve", "Run the flooding BFS protocol on a distributed instance");
  add_graph(solve);
  solve->add_option("--variant", variant, "connectivity, components, acyclicity or bipartiteness")->required();
  solve->add_option("--instance", instance_path, "Instance JSON")->required();

  auto* bench = app.add_subcommand("bench", "Measured rounds against the computed bound");
  add_graph(bench);
  bench->add_option("--function", function, "disj, cover, parity-majority or ed");
  bench->add_option("--n", n, "Input length")->required();
  bench->add_option("--repeats", repeats, "Sub-runs; run i uses seed + i");
  bench->add_option("--instance", instance_name, "Instance name for the report (default: the graph argument)");

  if (argc <= 1) {
    std::cerr << app.help();
    return RL_INVALID_INPUT;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return RL_INVALID_INPUT;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return RL_INVALID_INPUT;
  }

  try {
    json out;
    std::string csv;
    GraphHandle g;
    ResultHandle r;
    const bool want_csv = format == "csv";
    auto* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    auto no_csv = [&] {
      if (want_csv) bad_input("--format csv is available for tau-route, tau-mcf, disj-bound and bench");
    };

    if (cmd == tau_route) {
      open_graph(graph, seed, g);
      int t = 0;
      check(rl_tau_route(g.g, a, b, static_cast<std::int64_t>(nprime), &t));
      out = {{"command", name}, {"graph", graph}, {"a", a}, {"b", b}, {"nprime", nprime}, {"tau_route", t},
             {"seed", seed}};
      csv = bound_csv(graph, rl_graph_terminal_count(g.g), number_text(nprime), "tau_route", std::to_string(t), seed);
    } else if (cmd == tau_mcf) {
      open_graph(graph, seed, g);
      int t = 0;
      check(rl_tau_mcf(g.g, nprime, &t));
      out = {{"command", name}, {"graph", graph}, {"k", rl_graph_terminal_count(g.g)}, {"nprime", nprime},
             {"tau_mcf", t}, {"seed", seed}};
      csv = bound_csv(graph, rl_graph_terminal_count(g.g), number_text(nprime), "tau_mcf", std::to_string(t), seed);
    } else if (cmd == st_pack) {
      no_csv();
      open_graph(graph, seed, g);
      check(rl_st_pack(g.g, delta, mode.c_str(), seed, &r.r));
      out = r.parsed();
    } else if (cmd == disj_bound) {
      open_graph(graph, seed, g);
      check(rl_disj_bound(g.g, n, &r.r));
      out = r.parsed();
      out["seed"] = seed;
      csv = bound_csv(graph, rl_graph_terminal_count(g.g), std::to_string(n), "min_delta(n/ST+delta)",
                      out["bound"].get<std::string>(), seed);
    } else if (cmd == embed) {
      no_csv();
      open_graph(graph, seed, g);
      check(rl_embed_expander(g.g, tau, static_cast<int>(nprime), seed, &r.r));
      out = r.parsed();
    } else if (cmd == run) {
      no_csv();
      open_graph(graph, seed, g);
      const std::string inputs = read_file(inputs_path);
      check(rl_run(g.g, protocol.c_str(), inputs.c_str(), seed, max_rounds, transcript_path.empty() ? 0 : 1, &r.r));
      out = r.parsed();
      if (!transcript_path.empty()) {
        std::ofstream t(transcript_path);
        if (!t) bad_input("cannot write " + transcript_path);
        t << out["transcript"].get<std::string>();
        out.erase("transcript");
      }
    } else if (cmd == compile) {
      no_csv();
      open_graph(graph, seed, g);
      const std::string circuit = read_file(circuit_path);
      const std::string inputs = inputs_path.empty() ? std::string() : read_file(inputs_path);
      check(rl_compile(g.g, circuit.c_str(), inputs_path.empty() ? nullptr : inputs.c_str(), seed, &r.r));
      out = r.parsed();
    } else if (cmd == ed_circuit) {
      no_csv();
      check(rl_ed_circuit(k, m, &r.r));
      out = r.parsed();
    } else if (cmd == gen) {
      no_csv();
      if (reduction.empty() == family.empty()) bad_input("gen needs exactly one of --reduction and --family");
      if (!reduction.empty()) {
        check(rl_gen_reduction(reduction.c_str(), k, static_cast<int>(n), seed, &r.r));
      } else {
        check(rl_graph_generate(family.c_str(), fa, fb, seed, &g.g));
        check(rl_graph_to_json(g.g, &r.r));
      }
      out = r.parsed();
      out["seed"] = seed;
    } else if (cmd == solve) {
      no_csv();
      open_graph(graph, seed, g);
      const std::string instance = read_file(instance_path);
      check(rl_solve(g.g, variant.c_str(), instance.c_str(), seed, &r.r));
      out = r.parsed();
    } else if (cmd == bench) {
      open_graph(graph, seed, g);
      const std::string label = instance_name.empty() ? graph : instance_name;
      check(rl_bench(g.g, function.c_str(), n, seed, repeats, label.c_str(), &r.r));
      out = r.parsed();
      csv = rl_result_csv(r.r);
    }

    const std::string text = want_csv ? csv : out.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out_path);
      if (!f) bad_input("cannot write " + out_path);
      f << text;
    }
    return 0;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return RL_CONTRACT_VIOLATION;
  }
}
