#include "roundlab/functions.hpp"

#include "roundlab/error.hpp"

namespace rl {

void ComposedFunction::validate() const {
  require(k >= 1 && n >= 0, "composed function needs k ≥ 1 and n ≥ 0");
  require(static_cast<bool>(outer), "composed function has no outer function");
  require(static_cast<int>(inner.size()) == n, "need one inner table per coordinate");
  for (const auto& h : inner) {
    require(static_cast<int>(h.size()) == k + 1, "inner table needs k+1 entries");
    for (auto b : h) require(b <= 1, "inner table entries must be bits");
  }
}

bool ComposedFunction::evaluate(const std::vector<Bits>& inputs) const {
  require(static_cast<int>(inputs.size()) == k, "need one input block per player");
  Bits inner_values(n);
  for (int i = 0; i < n; ++i) {
    int count = 0;
    for (const auto& x : inputs) {
      require(static_cast<int>(x.size()) == n, "input block has the wrong length");
      count += x[i];
    }
    inner_values[i] = inner[i][count];
  }
  return outer(inner_values);
}

bool ComposedFunction::outer_is_constant() const {
  if (n > 20) return false;
  Bits y(n, 0);
  const bool first = outer(y);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    for (int i = 0; i < n; ++i) y[i] = (mask >> i) & 1;
    if (outer(y) != first) return false;
  }
  return true;
}

namespace {

Bits threshold_table(int k, int at_least) {
  Bits h(k + 1);
  for (int c = 0; c <= k; ++c) h[c] = c >= at_least;
  return h;
}

}  // namespace

ComposedFunction disj_function(int k, int n) {
  ComposedFunction f;
  f.name = "disj";
  f.k = k;
  f.n = n;
  f.inner.assign(n, threshold_table(k, k));
  f.outer = [](const Bits& y) {
    for (auto b : y)
      if (b) return true;
    return false;
  };
  return f;
}

ComposedFunction cover_function(int k, int n) {
  ComposedFunction f;
  f.name = "cover";
  f.k = k;
  f.n = n;
  f.inner.assign(n, threshold_table(k, 1));
  f.outer = [](const Bits& y) {
    for (auto b : y)
      if (!b) return false;
    return true;
  };
  return f;
}

ComposedFunction parity_of_majority(int k, int n) {
  ComposedFunction f;
  f.name = "parity-of-majority";
  f.k = k;
  f.n = n;
  f.inner.assign(n, threshold_table(k, k / 2 + 1));
  f.outer = [](const Bits& y) {
    int p = 0;
    for (auto b : y) p ^= b;
    return p == 1;
  };
  return f;
}

ComposedFunction constant_function(int k, int n, bool value) {
  ComposedFunction f;
  f.name = value ? "const-1" : "const-0";
  f.k = k;
  f.n = n;
  f.inner.assign(n, threshold_table(k, 1));
  f.outer = [value](const Bits&) { return value; };
  return f;
}

bool disj_oracle(const std::vector<Bits>& x) {
  require(!x.empty(), "need at least one player");
  const std::size_t n = x[0].size();
  for (const auto& s : x) require(s.size() == n, "inputs must share one length");
  for (std::size_t i = 0; i < n; ++i) {
    bool all = true;
    for (const auto& s : x) all = all && s[i];
    if (all) return true;
  }
  return false;
}

bool ed_oracle(const std::vector<Bits>& x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[i] == x[j]) return false;
  return true;
}

PairInputs PairInputs::zeros(int k, int n) {
  require(k >= 2 && n >= 1, "pair inputs need k ≥ 2 and n ≥ 1");
  PairInputs in;
  in.k = k;
  in.n = n;
  in.x.assign(k, std::vector<Bits>(k));
  for (int u = 0; u < k; ++u)
    for (int w = 0; w < k; ++w)
      if (u != w) in.x[u][w].assign(n, 0);
  return in;
}

PairInputs PairInputs::random(int k, int n, Rng& rng) {
  PairInputs in = zeros(k, n);
  for (int u = 0; u < k; ++u)
    for (int w = 0; w < k; ++w)
      for (auto& b : in.x[u][w]) b = static_cast<std::uint8_t>(rng.below(2));
  return in;
}

PairInputs PairInputs::from_code(int k, int n, std::uint64_t code) {
  PairInputs in = zeros(k, n);
  require(k * (k - 1) * n <= 63, "input space too large to enumerate");
  for (int u = 0; u < k; ++u)
    for (int w = 0; w < k; ++w)
      for (auto& b : in.x[u][w]) {
        b = code & 1;
        code >>= 1;
      }
  return in;
}

void PairInputs::validate() const {
  require(k >= 2 && n >= 1, "pair inputs need k ≥ 2 and n ≥ 1");
  require(static_cast<int>(x.size()) == k, "pair inputs need k rows");
  for (int u = 0; u < k; ++u) {
    require(static_cast<int>(x[u].size()) == k, "pair inputs need k columns");
    for (int w = 0; w < k; ++w) {
      if (u == w) {
        require(x[u][w].empty(), "x[u][u] must be empty");
      } else {
        require(static_cast<int>(x[u][w].size()) == n, "pair string has the wrong length");
        for (auto b : x[u][w]) require(b <= 1, "pair strings must be bits");
      }
    }
  }
}

bool pair_intersects(const PairInputs& in, int u, int w) {
  for (int i = 0; i < in.n; ++i)
    if (in.x[u][w][i] && in.x[w][u][i]) return true;
  return false;
}

bool or_disj_oracle(const PairInputs& in) {
  for (int u = 0; u < in.k; ++u)
    for (int w = u + 1; w < in.k; ++w)
      if (pair_intersects(in, u, w)) return true;
  return false;
}

bool and_disj_oracle(const PairInputs& in) {
  for (int u = 0; u < in.k; ++u)
    for (int w = u + 1; w < in.k; ++w)
      if (!pair_intersects(in, u, w)) return false;
  return true;
}

}  // namespace rl
