#pragma once

// Bipartite (k = 2) preservers A -> psi_T(M psi_R(psi_P(A)) N^T) and their
// catalog. Compositions that differ only by fixed factor permutations are
// grouped by the partition they are equivalent to; 16 groups remain.

#include <map>
#include <string>
#include <vector>

#include "rop/core.hpp"
#include "rop/partition.hpp"
#include "rop/preserver_forms.hpp"
#include "rop/subspaces.hpp"
#include "rop/tensor_core.hpp"

namespace rop {

enum class PsiP { id, pt1, pt2 };
enum class PsiR { id, r1, r2, r, vec };
enum class PsiT { id, transpose };

struct FormType {
  PsiP p = PsiP::id;
  PsiR r = PsiR::id;
  PsiT t = PsiT::id;

  friend bool operator==(const FormType&, const FormType&) = default;
};

struct BipartiteForm {
  FormType type;
  ComplexMatrix m;
  ComplexMatrix n;
};

inline std::string form_name(const FormType& f) {
  std::string s = f.p == PsiP::id ? "A" : (f.p == PsiP::pt1 ? "A^PT1" : "A^PT2");
  auto wrap = [&](const std::string& suffix) { s = (s == "A" ? s : "(" + s + ")") + suffix; };
  switch (f.r) {
    case PsiR::id: break;
    case PsiR::r1: wrap("^R1"); break;
    case PsiR::r2: wrap("^R2"); break;
    case PsiR::r: wrap("^R"); break;
    case PsiR::vec: s = "vec(" + s + ")"; break;
  }
  if (f.t == PsiT::transpose) wrap("^T");
  return s;
}

/// Kernel case governing the factor conditions: 1 (Id), 2 (R), 3 (R1), 4 (R2), 5 (vec).
inline int kernel_case(PsiR r) {
  switch (r) {
    case PsiR::id: return 1;
    case PsiR::r: return 2;
    case PsiR::r1: return 3;
    case PsiR::r2: return 4;
    case PsiR::vec: return 5;
  }
  return 0;
}

struct FormDescriptor {
  FormType type;
  std::string name;
  int kernel_case = 0;
  /// Factors of psi_R(psi_P(x1 y1^T (x) x2 y2^T)) = (x) column_tokens * ((x) row_tokens)^T.
  TokenList column_tokens;
  TokenList row_tokens;
  /// Partition of the canonical form this composition is permutationally similar to.
  Partition partition;
  Index m_cols = 0;
  Index n_cols = 0;
  bool exists = true;
  /// Every composition (including this one) equivalent to the same partition.
  std::vector<FormType> members;
};

inline FormDescriptor describe_form(const FormType& f, Index n1, Index n2) {
  const DimsProfile dims({n1, n2});
  // Per subsystem: (column token, row token) after psi_P.
  FactorToken c1{0, false}, r1{0, true}, c2{1, false}, r2{1, true};
  if (f.p == PsiP::pt1) std::swap(c1, r1);
  if (f.p == PsiP::pt2) std::swap(c2, r2);

  FormDescriptor d;
  d.type = f;
  d.name = form_name(f);
  d.kernel_case = kernel_case(f.r);
  switch (f.r) {
    case PsiR::id: d.column_tokens = {c1, c2}; d.row_tokens = {r1, r2}; break;
    case PsiR::r1: d.column_tokens = {c1, r1, c2}; d.row_tokens = {r2}; break;
    case PsiR::r2: d.column_tokens = {c1, c2, r2}; d.row_tokens = {r1}; break;
    case PsiR::r: d.column_tokens = {c1, r1}; d.row_tokens = {c2, r2}; break;
    case PsiR::vec: d.column_tokens = {c1, c2, r1, r2}; d.row_tokens = {}; break;
  }
  d.m_cols = product(token_dims(dims, d.column_tokens));
  d.n_cols = product(token_dims(dims, d.row_tokens));

  const TokenList& out_col = f.t == PsiT::id ? d.column_tokens : d.row_tokens;
  std::vector<Partition::Block> labels(2);
  for (Index i = 0; i < 2; ++i) {
    bool x_col = false, y_col = false;
    for (const auto& t : out_col) {
      if (t.subsystem != i) continue;
      (t.is_y ? y_col : x_col) = true;
    }
    labels[static_cast<std::size_t>(i)] = x_col && y_col   ? Partition::Block::p3
                                          : x_col          ? Partition::Block::p1
                                          : y_col          ? Partition::Block::p2
                                                           : Partition::Block::p4;
  }
  d.partition = Partition::from_labels(labels);
  d.exists = f.r != PsiR::vec || (n1 != 2 && n2 != 2);
  return d;
}

/// All 30 raw compositions psi_T o psi_R o psi_P.
inline std::vector<FormType> all_form_types() {
  std::vector<FormType> out;
  for (PsiT t : {PsiT::id, PsiT::transpose})
    for (PsiR r : {PsiR::id, PsiR::r1, PsiR::r2, PsiR::r, PsiR::vec})
      for (PsiP p : {PsiP::id, PsiP::pt1, PsiP::pt2}) out.push_back({p, r, t});
  return out;
}

/// The 16 distinct forms; the representative of each group is the first
/// composition in all_form_types() order.
inline std::vector<FormDescriptor> bipartite_catalog(Index n1, Index n2) {
  if (n1 < 2 || n2 < 2) throw Error(ErrorKind::invalid_argument, "catalog needs n1, n2 >= 2");
  std::vector<FormDescriptor> out;
  for (const FormType& f : all_form_types()) {
    FormDescriptor d = describe_form(f, n1, n2);
    bool merged = false;
    for (auto& e : out) {
      if (e.partition == d.partition) {
        e.members.push_back(f);
        merged = true;
        break;
      }
    }
    if (!merged) {
      d.members = {f};
      out.push_back(std::move(d));
    }
  }
  return out;
}

/// psi_R(psi_P(A)) for A in M_{n1 n2}.
inline ComplexMatrix apply_psi_rp(const FormType& f, const ComplexMatrix& a, BipartiteShape s) {
  ComplexMatrix y = f.p == PsiP::id    ? a
                    : f.p == PsiP::pt1 ? partial_transpose(a, s, Subsystem::first)
                                       : partial_transpose(a, s, Subsystem::second);
  switch (f.r) {
    case PsiR::id: return y;
    case PsiR::r1: return realign(y, s, Realignment::r1);
    case PsiR::r2: return realign(y, s, Realignment::r2);
    case PsiR::r: return realign(y, s, Realignment::full);
    case PsiR::vec: return vec(y);
  }
  return y;
}

inline ComplexMatrix apply_bipartite(const BipartiteForm& form, const ComplexMatrix& a, BipartiteShape s) {
  ComplexMatrix z = form.m * apply_psi_rp(form.type, a, s) * form.n.transpose();
  if (form.type.t == PsiT::transpose) z.transposeInPlace();
  return z;
}

/// Factors (M', N') of the equivalent partition form, so that the bipartite
/// map equals assemble_phi(dims, d.partition, M', N').
inline std::pair<ComplexMatrix, ComplexMatrix> equivalent_factors(const FormDescriptor& d, const DimsProfile& dims,
                                                                  const ComplexMatrix& m_factor,
                                                                  const ComplexMatrix& n_factor) {
  const bool t = d.type.t == PsiT::transpose;
  const ComplexMatrix& col = t ? n_factor : m_factor;
  const ComplexMatrix& row = t ? m_factor : n_factor;
  const TokenList& col_tokens = t ? d.row_tokens : d.column_tokens;
  const TokenList& row_tokens = t ? d.column_tokens : d.row_tokens;
  // col * ((x) col_tokens) = (col * P) * ((x) partition tokens) with P mapping partition order to form order.
  const IndexPermutation pc = token_reorder(dims, d.partition.column_tokens(), col_tokens);
  const IndexPermutation pr = token_reorder(dims, d.partition.row_tokens(), row_tokens);
  return {pc.right_apply(col), pr.right_apply(row)};
}

struct BipartiteAssembleOptions {
  bool strict = true;
  SearchOptions search;
};

/// Vec-action matrix of A -> psi_T(M psi_R(psi_P(A)) N^T), assembled column by
/// column on the elementary basis E_ab of M_{n1 n2}.
inline PreserverMap assemble_bipartite(const BipartiteForm& form, Index n1, Index n2,
                                       const BipartiteAssembleOptions& opts = {}) {
  const FormDescriptor d = describe_form(form.type, n1, n2);
  const DimsProfile dims({n1, n2});
  const Index m = dims.m();
  if (!d.exists)
    throw Error(ErrorKind::nonexistent, "vec-based form needs 2 not in {n1, n2}");
  if (form.m.rows() != m || form.m.cols() != d.m_cols)
    throw Error(ErrorKind::dimension, "M has the wrong shape for " + d.name);
  if (form.n.rows() != m || form.n.cols() != d.n_cols)
    throw Error(ErrorKind::dimension, "N has the wrong shape for " + d.name);
  if (opts.strict) {
    if (!check_kernel_condition(form.m, token_dims(dims, d.column_tokens), opts.search).holds)
      throw Error(ErrorKind::invalid_factors, "M violates the kernel condition of " + d.name);
    if (!check_kernel_condition(form.n, token_dims(dims, d.row_tokens), opts.search).holds)
      throw Error(ErrorKind::invalid_factors, "N violates the kernel condition of " + d.name);
  }

  const BipartiteShape s{n1, n2};
  ComplexMatrix phi(m * m, m * m);
  ComplexMatrix e = ComplexMatrix::Zero(m, m);
  for (Index c = 0; c < m * m; ++c) {
    e(c / m, c % m) = 1.0;
    phi.col(c) = vec(apply_bipartite(form, e, s));
    e(c / m, c % m) = 0.0;
  }
  auto [mp, np] = equivalent_factors(d, dims, form.m, form.n);
  return {dims, std::move(phi), MapOrigin{d.partition, std::move(mp), std::move(np)}};
}

}  // namespace rop
