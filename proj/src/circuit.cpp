#include "roundlab/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/multiprecision/cpp_int.hpp>

#include "roundlab/error.hpp"
#include "roundlab/rng.hpp"

namespace rl {

namespace {

int arity(GateKind kind) {
  switch (kind) {
    case GateKind::kInput:
      return 0;
    case GateKind::kAnd:
    case GateKind::kOr:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

const char* gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::kInput:
      return "INPUT";
    case GateKind::kAnd:
      return "AND";
    case GateKind::kOr:
      return "OR";
    case GateKind::kNot:
      return "NOT";
    case GateKind::kDup:
      return "DUP";
    case GateKind::kId:
      return "ID";
  }
  return "?";
}

GateKind parse_gate_kind(const std::string& name) {
  for (GateKind k : {GateKind::kInput, GateKind::kAnd, GateKind::kOr, GateKind::kNot, GateKind::kDup, GateKind::kId})
    if (name == gate_kind_name(k)) return k;
  fail(ErrorCode::kInvalidInput, "unknown gate kind '" + name + "'");
}

std::int64_t BooleanCircuit::wires() const {
  std::int64_t w = 0;
  for (const auto& level : levels)
    for (const auto& g : level) w += static_cast<std::int64_t>(g.inputs.size());
  return w;
}

std::int64_t BooleanCircuit::gates() const {
  std::int64_t s = 0;
  for (const auto& level : levels) s += static_cast<std::int64_t>(level.size());
  return s;
}

std::vector<int> BooleanCircuit::level_sizes() const {
  std::vector<int> s;
  for (const auto& level : levels) s.push_back(static_cast<int>(level.size()));
  return s;
}

std::vector<int> BooleanCircuit::fan_out(int level) const {
  require(level >= 0 && level <= depth(), "level out of range");
  std::vector<int> f(levels[level].size(), 0);
  if (level < depth())
    for (const auto& g : levels[level + 1])
      for (int i : g.inputs) ++f[i];
  return f;
}

void BooleanCircuit::validate() const {
  require(k >= 1 && n >= 0, "circuit needs k ≥ 1 and n ≥ 0");
  require(depth() >= 1, "circuit needs at least one level above the inputs");
  require(static_cast<int>(levels[0].size()) == n * k, "level 0 must hold exactly n·k input gates");
  std::vector<bool> seen(static_cast<std::size_t>(n) * k, false);
  for (const auto& g : levels[0]) {
    require(g.kind == GateKind::kInput && g.inputs.empty(), "level 0 may hold only input gates");
    require(g.terminal >= 0 && g.terminal < k && g.bit >= 0 && g.bit < n, "input gate refers to a missing bit");
    const std::size_t slot = static_cast<std::size_t>(g.terminal) * n + g.bit;
    require(!seen[slot], "input bit appears twice");
    seen[slot] = true;
  }
  for (int i = 1; i <= depth(); ++i) {
    for (const auto& g : levels[i]) {
      require(g.kind != GateKind::kInput, "input gate above level 0");
      require(static_cast<int>(g.inputs.size()) == arity(g.kind),
              std::string(gate_kind_name(g.kind)) + " gate has the wrong fan-in");
      for (int x : g.inputs)
        require(x >= 0 && x < static_cast<int>(levels[i - 1].size()), "wire refers to a missing gate");
    }
  }
  for (int i = 0; i < depth(); ++i)
    for (int f : fan_out(i)) require(f <= 2, "gate fan-out exceeds two");
  require(!outputs.empty(), "circuit has no output");
  for (int o : outputs) require(o >= 0 && o < static_cast<int>(levels.back().size()), "output refers to a missing gate");
}

std::vector<Bits> BooleanCircuit::evaluate_all(const std::vector<Bits>& inputs) const {
  require(static_cast<int>(inputs.size()) == k, "need one input block per terminal");
  for (const auto& block : inputs) require(static_cast<int>(block.size()) == n, "input block has the wrong length");
  std::vector<Bits> value(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    value[i].resize(levels[i].size());
    for (std::size_t j = 0; j < levels[i].size(); ++j) {
      const Gate& g = levels[i][j];
      auto in = [&](int s) { return value[i - 1][g.inputs[s]]; };
      std::uint8_t v = 0;
      switch (g.kind) {
        case GateKind::kInput:
          v = inputs[g.terminal][g.bit];
          break;
        case GateKind::kAnd:
          v = in(0) & in(1);
          break;
        case GateKind::kOr:
          v = in(0) | in(1);
          break;
        case GateKind::kNot:
          v = in(0) ^ 1;
          break;
        case GateKind::kDup:
        case GateKind::kId:
          v = in(0);
          break;
      }
      value[i][j] = v;
    }
  }
  return value;
}

Bits BooleanCircuit::evaluate(const std::vector<Bits>& inputs) const {
  const auto value = evaluate_all(inputs);
  Bits out;
  for (int o : outputs) out.push_back(value.back()[o]);
  return out;
}

nlohmann::json BooleanCircuit::to_json() const {
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& level : levels) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto& g : level) {
      nlohmann::json x = {{"kind", gate_kind_name(g.kind)}, {"inputs", g.inputs}};
      if (g.kind == GateKind::kInput) {
        x["terminal"] = g.terminal;
        x["bit"] = g.bit;
      }
      gates.push_back(std::move(x));
    }
    lv.push_back(std::move(gates));
  }
  return {{"k", k}, {"n", n}, {"levels", lv}, {"outputs", outputs}};
}

BooleanCircuit BooleanCircuit::from_json(const nlohmann::json& j) {
  BooleanCircuit c;
  try {
    c.k = j.at("k").get<int>();
    c.n = j.at("n").get<int>();
    for (const auto& level : j.at("levels")) {
      std::vector<Gate> gates;
      for (const auto& x : level) {
        Gate g;
        g.kind = parse_gate_kind(x.at("kind").get<std::string>());
        if (x.contains("inputs")) g.inputs = x.at("inputs").get<std::vector<int>>();
        if (g.kind == GateKind::kInput) {
          g.terminal = x.at("terminal").get<int>();
          g.bit = x.at("bit").get<int>();
        }
        gates.push_back(std::move(g));
      }
      c.levels.push_back(std::move(gates));
    }
    c.outputs = j.at("outputs").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidInput, std::string("malformed circuit JSON: ") + e.what());
  }
  c.validate();
  return c;
}

CircuitBuilder::CircuitBuilder(int k, int n) : k_(k), n_(n) {
  require(k >= 1 && n >= 0, "builder needs k ≥ 1 and n ≥ 0");
  kind_.assign(static_cast<std::size_t>(k) * n, GateKind::kInput);
  in_.assign(kind_.size(), {});
}

int CircuitBuilder::add(GateKind kind, std::vector<int> inputs) {
  for (int x : inputs) require(x >= 0 && x < static_cast<int>(kind_.size()), "gate input does not exist");
  kind_.push_back(kind);
  in_.push_back(std::move(inputs));
  return static_cast<int>(kind_.size()) - 1;
}

int CircuitBuilder::gate_and(int a, int b) { return add(GateKind::kAnd, {a, b}); }
int CircuitBuilder::gate_or(int a, int b) { return add(GateKind::kOr, {a, b}); }
int CircuitBuilder::gate_not(int a) { return add(GateKind::kNot, {a}); }

int CircuitBuilder::gate_xor(int a, int b) {
  return gate_or(gate_and(a, gate_not(b)), gate_and(gate_not(a), b));
}

int CircuitBuilder::mux(int s, int a, int b) { return gate_or(gate_and(s, a), gate_and(gate_not(s), b)); }

int CircuitBuilder::all_of(std::vector<int> xs) {
  require(!xs.empty(), "empty conjunction");
  while (xs.size() > 1) {
    std::vector<int> next;
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) next.push_back(gate_and(xs[i], xs[i + 1]));
    if (xs.size() % 2) next.push_back(xs.back());
    xs = std::move(next);
  }
  return xs[0];
}

int CircuitBuilder::any_of(std::vector<int> xs) {
  require(!xs.empty(), "empty disjunction");
  while (xs.size() > 1) {
    std::vector<int> next;
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) next.push_back(gate_or(xs[i], xs[i + 1]));
    if (xs.size() % 2) next.push_back(xs.back());
    xs = std::move(next);
  }
  return xs[0];
}

BooleanCircuit CircuitBuilder::build(const std::vector<int>& outputs) const {
  require(!outputs.empty(), "circuit needs an output");
  const int inputs = k_ * n_;
  std::vector<GateKind> kind = kind_;
  std::vector<std::vector<int>> in = in_;
  for (int o : outputs) require(o >= 0 && o < static_cast<int>(kind.size()), "output gate does not exist");

  // Keep inputs and whatever feeds an output.
  std::vector<bool> live(kind.size(), false);
  for (int i = 0; i < inputs; ++i) live[i] = true;
  std::vector<int> stack(outputs.begin(), outputs.end());
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    if (live[x] && x >= inputs) continue;
    live[x] = true;
    for (int y : in[x]) stack.push_back(y);
  }

  // Consumer slots per gate; slot -1 - i stands for output i.
  std::vector<std::vector<std::pair<int, int>>> consumers(kind.size());
  for (std::size_t x = 0; x < kind.size(); ++x)
    if (live[x])
      for (std::size_t s = 0; s < in[x].size(); ++s) consumers[in[x][s]].push_back({static_cast<int>(x), static_cast<int>(s)});
  std::vector<int> out = outputs;
  for (std::size_t i = 0; i < out.size(); ++i) consumers[out[i]].push_back({-1 - static_cast<int>(i), 0});

  auto attach = [&](int src, std::pair<int, int> slot) {
    if (slot.first < 0) {
      out[-1 - slot.first] = src;
    } else {
      in[slot.first][slot.second] = src;
    }
  };
  std::function<void(int, const std::vector<std::pair<int, int>>&)> distribute =
      [&](int src, const std::vector<std::pair<int, int>>& list) {
        if (list.size() <= 2) {
          for (const auto& slot : list) attach(src, slot);
          return;
        }
        const std::size_t half = list.size() / 2;
        for (const auto& part : {std::vector<std::pair<int, int>>(list.begin(), list.begin() + half),
                                 std::vector<std::pair<int, int>>(list.begin() + half, list.end())}) {
          if (part.size() == 1) {
            attach(src, part[0]);
            continue;
          }
          kind.push_back(GateKind::kDup);
          in.push_back({src});
          live.push_back(true);
          distribute(static_cast<int>(kind.size()) - 1, part);
        }
      };
  const std::size_t original = consumers.size();
  for (std::size_t x = 0; x < original; ++x)
    if (consumers[x].size() > 2) distribute(static_cast<int>(x), consumers[x]);

  // As-soon-as-possible levels.
  std::vector<int> level(kind.size(), -1);
  std::function<int(int)> level_of = [&](int x) {
    if (level[x] >= 0) return level[x];
    int l = 0;
    for (int y : in[x]) l = std::max(l, level_of(y) + 1);
    return level[x] = l;
  };
  int depth = 1;
  for (std::size_t x = 0; x < kind.size(); ++x)
    if (live[x]) depth = std::max(depth, level_of(static_cast<int>(x)));

  // Identity chains across skipped levels.
  auto lift = [&](int src, int target_level) {
    while (level[src] < target_level) {
      kind.push_back(GateKind::kId);
      in.push_back({src});
      live.push_back(true);
      level.push_back(level[src] + 1);
      src = static_cast<int>(kind.size()) - 1;
    }
    return src;
  };
  const std::size_t before_lift = kind.size();
  for (std::size_t x = inputs; x < before_lift; ++x) {
    if (!live[x]) continue;
    for (std::size_t s = 0; s < in[x].size(); ++s) {
      const int lifted = lift(in[x][s], level[x] - 1);
      in[x][s] = lifted;
    }
  }
  for (auto& o : out) o = lift(o, depth);

  // Emit levels; within a level, in creation order.
  BooleanCircuit c;
  c.k = k_;
  c.n = n_;
  c.levels.assign(depth + 1, {});
  std::vector<std::vector<int>> members(depth + 1);
  for (std::size_t x = 0; x < kind.size(); ++x)
    if (live[x]) members[level[x]].push_back(static_cast<int>(x));
  std::vector<int> position(kind.size(), -1);
  std::vector<int> uses(kind.size(), 0);
  for (std::size_t x = 0; x < kind.size(); ++x)
    if (live[x] && static_cast<int>(x) >= inputs)
      for (int y : in[x]) ++uses[y];
  for (int l = 0; l <= depth; ++l) {
    for (int x : members[l]) {
      Gate g;
      g.kind = kind[x];
      if (g.kind == GateKind::kDup || g.kind == GateKind::kId) g.kind = uses[x] == 2 ? GateKind::kDup : GateKind::kId;
      if (x < inputs) {
        g.kind = GateKind::kInput;
        g.terminal = x / n_;
        g.bit = x % n_;
      }
      for (int y : in[x]) g.inputs.push_back(position[y]);
      position[x] = static_cast<int>(c.levels[l].size());
      c.levels[l].push_back(std::move(g));
    }
  }
  for (int o : out) c.outputs.push_back(position[o]);
  c.validate();
  return c;
}

std::vector<std::pair<int, int>> batcher_network(int k) {
  require(k >= 1, "network needs at least one wire");
  int size = 1;
  while (size < k) size <<= 1;
  std::vector<std::pair<int, int>> net;
  for (int p = 1; p < size; p <<= 1)
    for (int q = p; q >= 1; q >>= 1)
      for (int j = q % p; j + q < size; j += 2 * q)
        for (int i = 0; i < q && i + j + q < size; ++i)
          if ((i + j) / (2 * p) == (i + j + q) / (2 * p) && i + j + q < k) net.push_back({i + j, i + j + q});
  return net;
}

BooleanCircuit build_ed_circuit(int k, int m) {
  require(k >= 2 && m >= 1, "ED circuit needs k ≥ 2 and m ≥ 1");
  CircuitBuilder b(k, m);
  std::vector<std::vector<int>> value(k);
  for (int t = 0; t < k; ++t)
    for (int i = 0; i < m; ++i) value[t].push_back(b.input(t, i));
  // x > y by a balanced tree over (greater, equal) pairs, most significant
  // half on the left.
  auto greater = [&](const std::vector<int>& x, const std::vector<int>& y) {
    std::vector<std::pair<int, int>> part;
    for (int i = 0; i < m; ++i) part.push_back({b.gate_and(x[i], b.gate_not(y[i])), b.gate_eq(x[i], y[i])});
    while (part.size() > 1) {
      std::vector<std::pair<int, int>> next;
      for (std::size_t i = 0; i + 1 < part.size(); i += 2) {
        const auto [gh, eh] = part[i];
        const auto [gl, el] = part[i + 1];
        next.push_back({b.gate_or(gh, b.gate_and(eh, gl)), b.gate_and(eh, el)});
      }
      if (part.size() % 2) next.push_back(part.back());
      part = std::move(next);
    }
    return part[0].first;
  };
  for (const auto& [i, j] : batcher_network(k)) {
    const int s = greater(value[i], value[j]);
    std::vector<int> lo(m), hi(m);
    for (int bit = 0; bit < m; ++bit) {
      lo[bit] = b.mux(s, value[j][bit], value[i][bit]);
      hi[bit] = b.mux(s, value[i][bit], value[j][bit]);
    }
    value[i] = std::move(lo);
    value[j] = std::move(hi);
  }
  std::vector<int> distinct;
  for (int t = 0; t + 1 < k; ++t) {
    std::vector<int> eq;
    for (int bit = 0; bit < m; ++bit) eq.push_back(b.gate_eq(value[t][bit], value[t + 1][bit]));
    distinct.push_back(b.gate_not(b.all_of(eq)));
  }
  return b.build({b.all_of(distinct)});
}

BooleanCircuit random_circuit(int k, int n, int levels, int width, std::uint64_t seed) {
  require(k >= 1 && n >= 1 && levels >= 1 && width >= 1, "random circuit needs positive parameters");
  Rng rng(seed);
  BooleanCircuit c;
  c.k = k;
  c.n = n;
  c.levels.emplace_back();
  for (int t = 0; t < k; ++t)
    for (int i = 0; i < n; ++i) c.levels[0].push_back({GateKind::kInput, {}, t, i});
  for (int l = 1; l <= levels; ++l) {
    const auto& prev = c.levels[l - 1];
    std::vector<int> room(prev.size(), 2);
    auto pick = [&]() {
      std::vector<int> open;
      for (std::size_t i = 0; i < prev.size(); ++i)
        if (room[i] > 0) open.push_back(static_cast<int>(i));
      if (open.empty()) return -1;
      const int x = open[rng.below(open.size())];
      --room[x];
      return x;
    };
    const int count = l == levels ? 1 : width;
    std::vector<Gate> level;
    for (int j = 0; j < count; ++j) {
      const int roll = rng.below_int(4);
      Gate g;
      const int a = pick();
      if (a < 0) break;
      const int b = roll < 3 ? pick() : -1;
      if (b < 0) {
        g.kind = rng.coin() ? GateKind::kNot : GateKind::kId;
        g.inputs = {a};
      } else {
        g.kind = roll == 0 ? GateKind::kAnd : roll == 1 ? GateKind::kOr : (rng.coin() ? GateKind::kAnd : GateKind::kOr);
        g.inputs = {a, b};
      }
      level.push_back(std::move(g));
    }
    c.levels.push_back(std::move(level));
  }
  for (int l = 0; l < c.depth(); ++l) {
    const auto f = c.fan_out(l);
    for (std::size_t j = 0; j < f.size(); ++j)
      if (f[j] == 2 && c.levels[l][j].kind == GateKind::kId) c.levels[l][j].kind = GateKind::kDup;
  }
  c.outputs = {0};
  c.validate();
  return c;
}

HashReduction ed_hash_reduce(const std::vector<Bits>& inputs, std::uint64_t seed) {
  using boost::multiprecision::cpp_int;
  require(!inputs.empty(), "need at least one input");
  const int n = static_cast<int>(inputs[0].size());
  require(n >= 1, "inputs must be nonempty strings");
  for (const auto& x : inputs) require(static_cast<int>(x.size()) == n, "inputs must share one length");
  const int k = static_cast<int>(inputs.size());
  const int lg = k <= 1 ? 0 : static_cast<int>(std::ceil(std::log2(static_cast<double>(k))));
  HashReduction h;
  h.family = "multiply-add-shift";
  h.out_bits = 2 * lg + 2;
  h.trials = static_cast<int>(std::ceil(std::log2(3.0 * k * k)));
  h.word_bits = std::max(2 * n, n + h.out_bits);
  const cpp_int modulus = cpp_int(1) << h.word_bits;
  h.outputs.assign(k, {});
  Rng rng(mix_seed(seed, 0x4a5bULL));
  auto random_word = [&]() -> cpp_int {
    cpp_int w = 0;
    for (int done = 0; done < h.word_bits; done += 64) w = (w << 64) | cpp_int(rng.next());
    return w % modulus;
  };
  for (int r = 0; r < h.trials; ++r) {
    const cpp_int a = random_word(), b = random_word();
    h.coefficients.push_back({a.str(), b.str()});
    for (int i = 0; i < k; ++i) {
      cpp_int x = 0;
      for (auto bit : inputs[i]) x = (x << 1) | bit;
      const cpp_int y = ((a * x + b) % modulus) >> (h.word_bits - h.out_bits);
      for (int j = h.out_bits - 1; j >= 0; --j) h.outputs[i].push_back(static_cast<std::uint8_t>(bit_test(y, j)));
    }
  }
  return h;
}

Bits ed_hash_of(const Bits& x, int k, std::uint64_t seed) {
  return ed_hash_reduce(std::vector<Bits>(k, x), seed).outputs[0];
}

}  // namespace rl
