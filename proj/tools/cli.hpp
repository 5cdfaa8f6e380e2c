#pragma once

// `rop` command line. Exit codes: 0 ok, 1 usage/parse, 2 nonexistent form,
// 3 verification failed, 4 recovery failed.

#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rop/rop.hpp"

namespace rop::cli {

enum ExitCode : int { ok = 0, usage = 1, nonexistent = 2, verify_failed = 3, recovery_failed = 4 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::nonexistent: return nonexistent;
    case ErrorKind::not_kronecker:
    case ErrorKind::ambiguous_structure: return recovery_failed;
    default: return usage;
  }
}

inline std::vector<Index> parse_dims(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse, "bad dims entry '" + item + "'");
    }
    if (used != item.size()) throw Error(ErrorKind::parse, "bad dims entry '" + item + "'");
    out.push_back(static_cast<Index>(v));
  }
  return out;
}

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    io::write_text_file(path, text);
}

inline std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << v;
  return os.str();
}

struct Args {
  std::string dims, partition, in, out, matrix;
  std::uint64_t seed = 0;
  int trials = 200;
  bool strict = false;
  Index p = 0, q = 0;
};

inline int cmd_gen(const Args& a, std::ostream& out, std::ostream& err) {
  const DimsProfile dims(parse_dims(a.dims));
  const Partition p = io::parse_partition(a.partition, dims.k());
  if (!partition_admits_factors(dims, p)) {
    err << "nonexistent: no valid (M, N) for partition " << p.to_string()
        << " (k=2, 2 in {n1,n2}, P3=K or P4=K)\n";
    return nonexistent;
  }
  auto [m, n] = synthesize_factors(dims, p, a.seed);
  // The synthesized factors already passed the kernel-condition checker.
  const PreserverMap map = assemble_phi(dims, p, m, n, AssembleOptions{.strict = false, .search = {}});
  io::MapBundle b{dims, p, m, n, map.phi};
  emit(a.out, io::to_canonical(io::bundle_to_json(b)), out);
  return ok;
}

inline int cmd_verify(const Args& a, std::ostream& out, std::ostream& err) {
  const io::MapBundle b = io::bundle_from_json(io::read_json_file(a.in));
  const PreserverMap map = b.to_map();
  VerifyOptions opts;
  opts.trials = a.trials;
  opts.seed = a.seed;
  const VerificationReport rep = is_rank_one_preserver(map, opts);
  out << "verdict: " << to_string(rep.verdict) << "\n"
      << "products checked: " << rep.trials << "\n"
      << "max sigma2/sigma1: " << sci(rep.max_second_singular) << "\n";
  if (rep.verdict == Verdict::fail) {
    const auto& c = *rep.counterexample;
    out << "counterexample sigma2/sigma1: " << sci(c.ratio) << "\n";
    io::Json j{{"input", io::matrix_to_json(c.input.realize())}, {"output", io::matrix_to_json(c.output)}};
    out << io::to_canonical(j);
    return verify_failed;
  }
  if (!a.strict) return ok;

  ClassifyOptions copts;
  copts.seed = a.seed;
  try {
    const RecoveryResult r = recover(map, copts);
    out << "partition: " << r.partition.to_string() << "\n"
        << "residual: " << sci(r.residual) << "\n";
    if (r.residual >= tol::recover_residual) {
      err << "strict check failed: reassembled map deviates by " << sci(r.residual) << "\n";
      return verify_failed;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return recovery_failed;
  }
  return ok;
}

inline int cmd_recover(const Args& a, std::ostream& out, std::ostream& err) {
  const io::MapBundle b = io::bundle_from_json(io::read_json_file(a.in));
  PreserverMap map = b.to_map();
  map.origin.reset();
  ClassifyOptions copts;
  copts.seed = a.seed;
  const RecoveryResult r = recover(map, copts);
  if (r.residual >= tol::recover_residual) {
    err << "recovery residual " << sci(r.residual) << " exceeds " << sci(tol::recover_residual) << "\n";
    return recovery_failed;
  }
  err << "partition: " << r.partition.to_string() << "  residual: " << sci(r.residual) << "\n";
  io::MapBundle res{b.dims, r.partition, r.m, r.n, map.phi};
  emit(a.out, io::to_canonical(io::bundle_to_json(res)), out);
  return ok;
}

inline int cmd_ces(const Args& a, std::ostream& out) {
  const Subspace s = ces_construct(a.p, a.q);
  const DecomposableSearchReport rep = contains_decomposable(s, {a.p, a.q}, {});
  out << "dim: " << s.dim() << " (max " << ces_max_dim({a.p, a.q}) << ")\n"
      << "check: " << to_string(rep.verdict) << "  min_value: " << sci(rep.min_value) << "\n";
  out << io::to_canonical(io::Json{{"basis", io::matrix_to_json(s.basis)}});
  return ok;
}

inline int cmd_kernel_check(const Args& a, std::ostream& out) {
  const ComplexMatrix m = io::matrix_from_json(io::read_json_file(a.matrix));
  const std::vector<Index> dims = parse_dims(a.dims);
  if (product(dims) != m.cols())
    throw Error(ErrorKind::dimension, "product of --dims must equal the number of columns");
  const Subspace ker = kernel_basis(m);
  DecomposableSearchOptions opts;
  opts.search.seed = a.seed;
  const DecomposableSearchReport rep = contains_decomposable(ker, dims, opts);
  out << "kernel dim: " << ker.dim() << "\n"
      << "verdict: " << to_string(rep.verdict) << "\n"
      << "min_value: " << sci(rep.min_value) << "\n";
  if (rep.verdict == SearchVerdict::found) {
    io::Json w = io::Json::array();
    for (const auto& v : *rep.witness) w.push_back(io::matrix_to_json(v));
    out << io::to_canonical(io::Json{{"witness", w}});
  }
  return ok;
}

inline int cmd_catalog(const Args& a, std::ostream& out) {
  const auto cat = bipartite_catalog(a.p, a.q);
  out << std::left << std::setw(4) << "#" << std::setw(18) << "form" << std::setw(10) << "partition" << std::setw(6)
      << "case" << std::setw(10) << "M" << std::setw(10) << "N" << std::setw(8) << "exists"
      << "equivalent compositions\n";
  const Index m = a.p * a.q;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const auto& d = cat[i];
    std::string members;
    for (std::size_t j = 1; j < d.members.size(); ++j) members += (j > 1 ? ", " : "") + form_name(d.members[j]);
    out << std::setw(4) << i + 1 << std::setw(18) << d.name << std::setw(10) << d.partition.to_string() << std::setw(6)
        << d.kernel_case << std::setw(10) << (std::to_string(m) + "x" + std::to_string(d.m_cols)) << std::setw(10)
        << (std::to_string(m) + "x" + std::to_string(d.n_cols)) << std::setw(8) << (d.exists ? "yes" : "no") << members
        << "\n";
  }
  return ok;
}

/// Entry point shared by main() and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-one preservers on tensor products of matrix spaces"};
  app.require_subcommand(1);
  Args a;

  auto* gen = app.add_subcommand("gen", "synthesize valid (M, N) for a partition and write a map bundle");
  gen->add_option("--dims", a.dims, "local dimensions, e.g. 2,3")->required();
  gen->add_option("--partition", a.partition, "P1|P2|P3|P4 with 1-based indices, e.g. \"1|2||\"")->required();
  gen->add_option("--seed", a.seed, "random seed");
  gen->add_option("-o,--out", a.out, "output path (default stdout)");

  auto* ver = app.add_subcommand("verify", "test the rank-one preserving property of a bundle");
  ver->add_option("bundle", a.in, "map bundle")->required();
  ver->add_option("--trials", a.trials, "random rank-one products");
  ver->add_option("--seed", a.seed, "random seed");
  ver->add_flag("--strict", a.strict, "also recover the structure and require an exact reassembly");

  auto* rec = app.add_subcommand("recover", "recover partition and factors from phi");
  rec->add_option("bundle", a.in, "map bundle (phi is enough)")->required();
  rec->add_option("--seed", a.seed, "random seed");
  rec->add_option("-o,--out", a.out, "output path (default stdout)");

  auto* ces = app.add_subcommand("ces", "maximal completely entangled subspace of C^p (x) C^q");
  ces->add_option("p", a.p)->required()->check(CLI::Range(2, 64));
  ces->add_option("q", a.q)->required()->check(CLI::Range(2, 64));

  auto* kc = app.add_subcommand("kernel-check", "search Ker(M) for product vectors");
  kc->add_option("matrix", a.matrix, "matrix file")->required();
  kc->add_option("--dims", a.dims, "factor dimensions of the column space")->required();
  kc->add_option("--seed", a.seed, "random seed");

  auto* cat = app.add_subcommand("catalog", "list the bipartite forms");
  cat->add_option("n1", a.p)->required()->check(CLI::Range(2, 64));
  cat->add_option("n2", a.q)->required()->check(CLI::Range(2, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : usage;
  }

  try {
    if (gen->parsed()) return cmd_gen(a, out, err);
    if (ver->parsed()) return cmd_verify(a, out, err);
    if (rec->parsed()) return cmd_recover(a, out, err);
    if (ces->parsed()) return cmd_ces(a, out);
    if (kc->parsed()) return cmd_kernel_check(a, out);
    if (cat->parsed()) return cmd_catalog(a, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}

}  // namespace rop::cli
