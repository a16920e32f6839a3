#include "swapent/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "swapent/errors.hpp"

namespace swapent {
namespace {

using Op2 = std::array<double, 4>;  // row-major (out, in)

constexpr Op2 kIdentity{1, 0, 0, 1};
constexpr Op2 kPauliX{0, 1, 1, 0};
constexpr Op2 kPauliZ{1, 0, 0, -1};
constexpr Op2 kRaise{0, 1, 0, 0};  // |0><1|
constexpr Op2 kLower{0, 0, 1, 0};  // |1><0|

struct OnsiteTerm {
  std::size_t site;
  Op2 op;
  double coef;
};

// coef * a_i b_j with i < j; identities in between.
struct PairTerm {
  std::size_t i, j;
  Op2 a, b;
  double coef;
};

struct TermList {
  std::size_t length = 0;
  std::vector<OnsiteTerm> onsite;
  std::vector<PairTerm> pairs;
};

void add_bond(TermList& terms, std::size_t a, std::size_t b, const Op2& op_a, const Op2& op_b,
              double coef) {
  if (a < b)
    terms.pairs.push_back({a, b, op_a, op_b, coef});
  else
    terms.pairs.push_back({b, a, op_b, op_a, coef});
}

// Terms of one periodic chain placed at sites [offset, offset + L).
void append_chain_terms(TermList& terms, const ModelSpec& spec, std::size_t offset) {
  const std::size_t L = spec.length;
  for (std::size_t j = 0; j < L; ++j) {
    const std::size_t a = offset + j;
    const std::size_t b = offset + (j + 1) % L;
    if (spec.kind == ModelKind::XXZ) {
      // XX + YY = 2 (S+ S- + S- S+) in Pauli normalization
      add_bond(terms, a, b, kRaise, kLower, 2.0);
      add_bond(terms, a, b, kLower, kRaise, 2.0);
      if (spec.delta != 0.0) add_bond(terms, a, b, kPauliZ, kPauliZ, spec.delta);
    } else {
      add_bond(terms, a, b, kPauliZ, kPauliZ, -1.0);
      terms.onsite.push_back({a, kPauliX, -1.0});
    }
  }
}

TermList chain_terms(const ModelSpec& spec) {
  TermList t;
  t.length = spec.length;
  append_chain_terms(t, spec, 0);
  return t;
}

void put(DenseTensor& w, std::size_t wl, std::size_t wr, const Op2& op, double coef) {
  const std::size_t dr = w.extent(3);
  for (std::size_t o = 0; o < 2; ++o)
    for (std::size_t i = 0; i < 2; ++i)
      w[((wl * 2 + o) * 2 + i) * dr + wr] += coef * op[o * 2 + i];
}

// Finite-automaton MPO: channel 0 = nothing placed yet, channel 1 = term
// complete, and one channel per pair term that is open across the bond.
MatrixProductOperator build_mpo(const TermList& terms) {
  const std::size_t n = terms.length;
  std::vector<std::vector<std::size_t>> open(n + 1);  // open[b]: pair terms crossing bond b
  for (std::size_t t = 0; t < terms.pairs.size(); ++t)
    for (std::size_t b = terms.pairs[t].i + 1; b <= terms.pairs[t].j; ++b) open[b].push_back(t);
  auto channel = [&](std::size_t b, std::size_t t) {
    const auto& v = open[b];
    return 2 + static_cast<std::size_t>(std::find(v.begin(), v.end(), t) - v.begin());
  };

  MatrixProductOperator mpo;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t dl = 2 + open[k].size();
    const std::size_t dr = 2 + open[k + 1].size();
    DenseTensor w({dl, 2, 2, dr});
    put(w, 0, 0, kIdentity, 1.0);
    put(w, 1, 1, kIdentity, 1.0);
    for (const auto& o : terms.onsite)
      if (o.site == k) put(w, 0, 1, o.op, o.coef);
    for (std::size_t t = 0; t < terms.pairs.size(); ++t) {
      const PairTerm& p = terms.pairs[t];
      if (p.i == k) put(w, 0, channel(k + 1, t), p.a, p.coef);
      if (p.i < k && k < p.j) put(w, channel(k, t), channel(k + 1, t), kIdentity, 1.0);
      if (p.j == k) put(w, channel(k, t), 1, p.b, 1.0);
    }
    // terminal bonds keep only the "nothing placed" row and the "complete" column
    const std::size_t rows = k == 0 ? 1 : dl;
    const std::size_t cols = k + 1 == n ? 1 : dr;
    DenseTensor cut({rows, 2, 2, cols});
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t b = 0; b < cols; ++b) {
          const std::size_t src_b = k + 1 == n ? 1 : b;
          cut[(a * 4 + s) * cols + b] = w[(a * 4 + s) * dr + src_b];
        }
    mpo.sites.push_back(std::move(cut));
  }
  return mpo;
}

}  // namespace

void ModelSpec::validate() const {
  if (kind == ModelKind::XXZ && !(delta > -1.0 && delta <= 1.0))
    throw DomainError("XXZ anisotropy must lie in (-1, 1]");
  if (length < 2 || (length == 2 && !allow_two_sites))
    throw DomainError("periodic chain needs at least 3 sites");
}

std::string ModelSpec::name() const {
  std::ostringstream os;
  if (kind == ModelKind::XXZ)
    os << "xxz(delta=" << delta << ", L=" << length << ")";
  else
    os << "tfim(L=" << length << ")";
  return os.str();
}

ModelKind parse_model_kind(const std::string& text) {
  if (text == "xxz" || text == "XXZ") return ModelKind::XXZ;
  if (text == "tfim" || text == "TFIM") return ModelKind::TFIM;
  throw DomainError("unknown model '" + text + "'");
}

MatrixProductOperator xxz_mpo(const ModelSpec& spec) {
  if (spec.kind != ModelKind::XXZ) throw DomainError("xxz_mpo needs an XXZ spec");
  spec.validate();
  return build_mpo(chain_terms(spec));
}

MatrixProductOperator tfim_mpo(const ModelSpec& spec) {
  if (spec.kind != ModelKind::TFIM) throw DomainError("tfim_mpo needs a TFIM spec");
  spec.validate();
  return build_mpo(chain_terms(spec));
}

MatrixProductOperator model_mpo(const ModelSpec& spec) {
  return spec.kind == ModelKind::XXZ ? xxz_mpo(spec) : tfim_mpo(spec);
}

MatrixProductOperator doubled_mpo(const ModelSpec& spec) {
  spec.validate();
  TermList t;
  t.length = 2 * spec.length;
  append_chain_terms(t, spec, 0);
  append_chain_terms(t, spec, spec.length);
  return build_mpo(t);
}

DenseTensor dense_hamiltonian(const ModelSpec& spec) {
  spec.validate();
  const std::size_t L = spec.length;
  if (L > kDenseMaxLength) throw LimitExceeded("dense Hamiltonian limited to L <= 14");
  const std::size_t dim = std::size_t{1} << L;
  DenseTensor h({dim, dim});
  const TermList terms = chain_terms(spec);
  auto bit = [&](std::size_t site) { return std::size_t{1} << (L - 1 - site); };

  for (const auto& o : terms.onsite) {
    const std::size_t m = bit(o.site);
    for (std::size_t c = 0; c < dim; ++c) {
      const std::size_t ci = (c & m) ? 1 : 0;
      for (std::size_t ri = 0; ri < 2; ++ri) {
        const double v = o.op[ri * 2 + ci];
        if (v == 0.0) continue;
        const std::size_t r = ri ? (c | m) : (c & ~m);
        h[r * dim + c] += o.coef * v;
      }
    }
  }
  for (const auto& p : terms.pairs) {
    const std::size_t mi = bit(p.i), mj = bit(p.j);
    for (std::size_t c = 0; c < dim; ++c) {
      const std::size_t ci = (c & mi) ? 1 : 0, cj = (c & mj) ? 1 : 0;
      for (std::size_t ri = 0; ri < 2; ++ri)
        for (std::size_t rj = 0; rj < 2; ++rj) {
          const double v = p.a[ri * 2 + ci] * p.b[rj * 2 + cj];
          if (v == 0.0) continue;
          std::size_t r = ri ? (c | mi) : (c & ~mi);
          r = rj ? (r | mj) : (r & ~mj);
          h[r * dim + c] += p.coef * v;
        }
    }
  }
  return h;
}

GroundState chain_ground_state(const ModelSpec& spec, const DmrgParams& params, std::uint64_t seed) {
  const MatrixProductOperator h = model_mpo(spec);
  const MatrixProductState init = random_state(spec.length, 8, seed);
  DmrgResult r = dmrg_minimize(h, init, params);
  return GroundState{std::move(r.state), r.energy, std::move(r.diagnostics)};
}

MatrixProductState double_chain(const MatrixProductState& chain) {
  if (chain.sites.empty()) throw DomainError("cannot double an empty chain");
  MatrixProductState left = canonicalize(chain, chain.length() - 1);
  MatrixProductState right = canonicalize(chain, 0);
  left.log_norm = 0.0;
  right.log_norm = 0.0;
  MatrixProductState doubled = concatenate(left, right);
  return canonicalize(std::move(doubled), chain.length() - 1);
}

GroundState doubled_ground_state(const ModelSpec& spec, DoublingMethod method,
                                 const DmrgParams& params, std::uint64_t seed) {
  spec.validate();
  if (method == DoublingMethod::Concatenate) {
    GroundState single = chain_ground_state(spec, params, seed);
    GroundState out;
    out.state = double_chain(single.state);
    out.energy = 2.0 * single.energy;
    out.diagnostics = std::move(single.diagnostics);
    return out;
  }
  const MatrixProductOperator h = doubled_mpo(spec);
  const MatrixProductState init = random_state(2 * spec.length, 8, seed);
  DmrgResult r = dmrg_minimize(h, init, params);
  GroundState out{canonicalize(std::move(r.state), spec.length - 1), r.energy, std::move(r.diagnostics)};
  out.state.log_norm = 0.0;
  return out;
}

}  // namespace swapent
