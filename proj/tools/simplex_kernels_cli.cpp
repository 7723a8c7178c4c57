// simplex-kernels: evaluate, verify, sample, and transform orthogonal
// polynomial kernels on the continuous and discrete simplex.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "simplexkern/copula.hpp"
#include "simplexkern/dist.hpp"
#include "simplexkern/hahn.hpp"
#include "simplexkern/intrep.hpp"
#include "simplexkern/jacobi.hpp"
#include "simplexkern/pds.hpp"
#include "simplexkern/symkern.hpp"
#include "simplexkern/version.hpp"

using json = nlohmann::ordered_json;
using namespace simplexkern;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

std::vector<Rational> parse_rationals(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& t : split_csv(s)) out.push_back(parse_rational(t));
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split_csv(s)) out.push_back(std::stod(t));
  return out;
}

MultiIndex parse_multiindex(const std::string& s) {
  MultiIndex out;
  for (const auto& t : split_csv(s)) out.push_back(std::stoi(t));
  return out;
}

struct Output {
  std::optional<std::string> path;

  void write(const std::string& text) const {
    if (path) {
      std::ofstream f(*path);
      if (!f) throw std::invalid_argument("cannot open output file: " + *path);
      f << text;
    } else {
      std::cout << text;
    }
  }
};

json sequence_to_json(const DegreeSequence<Rational>& seq) {
  json j;
  j["schema"] = "simplex-kernels/sequence-v1";
  j["flavor"] = "exact";
  j["provenance"] = seq.provenance;
  json vals = json::array();
  for (const auto& v : seq.values) vals.push_back(to_string(v));
  j["values"] = vals;
  return j;
}

json sequence_to_json(const DegreeSequence<double>& seq) {
  json j;
  j["schema"] = "simplex-kernels/sequence-v1";
  j["flavor"] = "float";
  j["provenance"] = seq.provenance;
  j["values"] = seq.values;
  return j;
}

template <class T>
DegreeSequence<T> sequence_from_json(const json& j) {
  if (j.value("schema", "") != "simplex-kernels/sequence-v1")
    throw std::invalid_argument("input is not a simplex-kernels sequence file");
  DegreeSequence<T> seq;
  seq.provenance = j.value("provenance", "");
  for (const auto& v : j.at("values")) {
    if constexpr (scalar_traits<T>::exact) {
      if (v.is_string())
        seq.values.push_back(parse_rational(v.get<std::string>()));
      else
        seq.values.push_back(rational_from_double(v.get<double>()));
    } else {
      if (v.is_string())
        seq.values.push_back(to_double(parse_rational(v.get<std::string>())));
      else
        seq.values.push_back(v.get<double>());
    }
  }
  return seq;
}

json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open input file: " + path);
  json j;
  f >> j;
  return j;
}

struct CheckRow {
  std::string name;
  bool pass;
  std::string mode;  // "exact" or "mc"
  json detail;
};

json report_json(const std::string& command, std::uint64_t seed, const std::string& flavor,
                 int truncation, const std::vector<CheckRow>& checks) {
  json j;
  j["schema"] = "simplex-kernels/report-v1";
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["flavor"] = flavor;
  j["truncation"] = truncation;
  bool all = true;
  json rows = json::array();
  for (const auto& c : checks) {
    json row;
    row["name"] = c.name;
    row["status"] = c.pass ? "pass" : "fail";
    row["mode"] = c.mode;
    if (!c.detail.is_null()) row["detail"] = c.detail;
    rows.push_back(row);
    all = all && c.pass;
  }
  j["checks"] = rows;
  j["all_pass"] = all;
  return j;
}

void add_mc_checks(std::vector<CheckRow>& rows, const std::vector<McCheck>& checks,
                   double z_limit = 3.0) {
  for (const auto& c : checks) {
    json d;
    d["estimate"] = c.estimate;
    d["std_error"] = c.std_error;
    d["exact"] = c.exact;
    d["z_score"] = c.z_score;
    rows.push_back({c.name, std::abs(c.z_score) <= z_limit, "mc", d});
  }
}

std::vector<Rational> rational_point(int d, std::uint64_t salt) {
  std::mt19937_64 gen(salt);
  std::uniform_int_distribution<int> pick(1, 9);
  std::vector<Rational> x(d);
  Rational tot(0);
  for (int i = 0; i < d; ++i) {
    x[i] = Rational(pick(gen));
    tot += x[i];
  }
  for (auto& v : x) v /= tot;
  return x;
}

// --- verify suites ---

std::vector<CheckRow> suite_orthogonality(int max_n, int N) {
  std::vector<CheckRow> rows;
  for (Rational t : {Rational(1), Rational(2), Rational(1, 2), Rational(7, 3), Rational(5)}) {
    CoeffTriangle<Rational> tri(t, 12);
    rows.push_back({"triangle-inversion theta=" + to_string(t),
                    tri.identity_defect() == Rational(0), "exact", nullptr});
  }
  std::vector<DirichletParams<Rational>> alphas = {
      DirichletParams<Rational>({Rational(1), Rational(1)}),
      DirichletParams<Rational>({Rational(1), Rational(1), Rational(2)})};
  int salt = 101;
  for (const auto& alpha : alphas) {
    auto x = rational_point(alpha.dim(), salt++);
    auto z = rational_point(alpha.dim(), salt++);
    bool ok = true;
    for (int n = 0; n <= max_n && ok; ++n)
      for (int m = 0; m <= max_n && ok; ++m) {
        auto qn = q_kernel_poly_second(alpha, n, x);
        auto qm = q_kernel_poly_second(alpha, m, z);
        Rational lhs = dirichlet_expectation(alpha, qn * qm);
        Rational rhs = (n == m) ? q_kernel(alpha, n, x, z).value : Rational(0);
        ok = lhs == rhs;
      }
    rows.push_back({"jacobi-reproducing d=" + std::to_string(alpha.dim()), ok, "exact",
                    nullptr});
  }
  {
    DirichletParams<Rational> alpha({Rational(1), Rational(2)});
    HahnContext<Rational> ctx(alpha, N);
    auto supp = compositions(2, N);
    bool ok = true;
    for (const auto& r : supp)
      for (const auto& t : supp)
        for (int n = 0; n <= N && ok; ++n)
          for (int m = 0; m <= N && ok; ++m) {
            Rational acc(0);
            for (const auto& s : supp)
              acc += dm_pmf(alpha, s) * h_kernel(ctx, n, r, s).value *
                     h_kernel(ctx, m, t, s).value;
            Rational expect = (n == m) ? h_kernel(ctx, n, r, t).value : Rational(0);
            ok = acc == expect;
          }
    rows.push_back({"hahn-orthogonality d=2 N=" + std::to_string(N), ok, "exact", nullptr});
  }
  return rows;
}

std::vector<CheckRow> suite_gasper(int N) {
  std::vector<CheckRow> rows;
  Rational a(1), b(2);
  bool ok = true;
  for (int n = 0; n <= N && ok; ++n)
    for (int r = 0; r <= N && ok; ++r)
      for (int s = 0; s <= N && ok; ++s)
        ok = gasper_product_double_sum(a, b, n, r, s, N) ==
             univariate_hahn(a, b, n, r, N) * univariate_hahn(a, b, n, s, N);
  rows.push_back({"gasper-double-sum d=2 N=" + std::to_string(N), ok, "exact", nullptr});

  std::vector<DirichletParams<Rational>> alphas = {
      DirichletParams<Rational>({Rational(1), Rational(2)}),
      DirichletParams<Rational>({Rational(1), Rational(1), Rational(2)})};
  for (const auto& alpha : alphas) {
    int nn = alpha.dim() == 2 ? N : std::min(N, 4);
    HahnContext<Rational> ctx(alpha, nn);
    auto supp = compositions(alpha.dim(), nn);
    bool equal = true;
    for (const auto& r : supp)
      for (const auto& s : supp)
        for (int n = 0; n <= nn && equal; ++n)
          equal = h_kernel(ctx, n, r, s).value == h_kernel_chi_route(ctx, n, r, s).value;
    rows.push_back({"chi-vs-xi-route d=" + std::to_string(alpha.dim()), equal, "exact",
                    nullptr});
  }
  return rows;
}

std::vector<CheckRow> suite_zchain(const std::vector<Rational>& alpha, std::uint64_t draws,
                                   std::uint64_t seed) {
  DirichletParams<Rational> a(alpha);
  auto x = rational_point(a.dim(), 301);
  auto y = rational_point(a.dim(), 302);
  std::vector<CheckRow> rows;
  add_mc_checks(rows, verify_z_moments(a, x, y, 3, draws, seed));
  add_mc_checks(rows, verify_kernel_representation(a, x, y, 4, draws, seed + 1));
  return rows;
}

std::vector<CheckRow> suite_hahn_mixture(std::uint64_t draws, std::uint64_t seed) {
  DirichletParams<Rational> alpha({Rational(2), Rational(2), Rational(1)});
  std::vector<CheckRow> rows;
  add_mc_checks(rows, verify_hahn_mixture(alpha, {1, 1, 1}, {2, 1, 0}, 2, draws, seed));
  return rows;
}

std::vector<CheckRow> suite_pds_roundtrip() {
  std::vector<CheckRow> rows;
  Rational theta(2);
  bool ok = true;
  for (int l = 0; l <= 8 && ok; ++l) {
    DegreeSequence<Rational> pmf;
    pmf.provenance = "delta" + std::to_string(l);
    pmf.values.assign(9, Rational(0));
    pmf.values[l] = Rational(1);
    auto rho = pmf_to_jpds(theta, pmf);
    ok = jpds_to_pmf(theta, rho, 8).pmf.values == pmf.values;
  }
  rows.push_back({"pmf-roundtrip support<=8", ok, "exact", nullptr});

  DegreeSequence<Rational> wfr;
  wfr.provenance = "wright-fisher t=1";
  for (int n = 0; n <= 40; ++n)
    wfr.values.push_back(rational_from_double(std::exp(-0.5 * n * (n + 1.0))));
  auto h = jpds_to_hpds(theta, 4, wfr);
  DirichletParams<Rational> a11({Rational(1), Rational(1)});
  rows.push_back({"wf-hpds-certificate N=4",
                  scan_hpds(a11, 4, h).verdict == Verdict::kCertifiedPositive, "exact",
                  nullptr});

  DegreeSequence<Rational> pmf{
      {Rational(1, 8), Rational(1, 2), Rational(1, 4), Rational(1, 8)}, "mix"};
  auto rho = pmf_to_jpds(theta, pmf);
  std::vector<DirichletParams<Rational>> alphas = {
      DirichletParams<Rational>({Rational(1), Rational(1)}),
      DirichletParams<Rational>({Rational(1, 2), Rational(1), Rational(1, 2)})};
  bool dim_ok = true;
  int salt = 77;
  for (const auto& alpha : alphas) {
    auto x = rational_point(alpha.dim(), salt++);
    auto y = rational_point(alpha.dim(), salt++);
    Rational lhs(0), rhs(0);
    for (int m = 0; m <= pmf.max_degree(); ++m) lhs += pmf.values[m] * xi(alpha, m, x, y);
    for (int n = 0; n <= rho.max_degree(); ++n)
      rhs += rho.values[n] * q_kernel(alpha, n, x, y).value;
    dim_ok = dim_ok && lhs == rhs;
  }
  rows.push_back({"dimension-independence d=2,3", dim_ok, "exact", nullptr});
  return rows;
}

// --- sample targets ---

void write_csv_header(std::ostream& os, const std::string& target, std::uint64_t seed,
                      const std::string& spec, const std::vector<std::string>& cols) {
  os << "# simplex-kernels v" << kVersion << " target=" << target << " seed=" << seed
     << " " << spec << "\n";
  for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orthogonal polynomial kernels on the simplex"};
  app.require_subcommand(1);

  // ---- eval ----
  auto* eval = app.add_subcommand("eval", "evaluate kernels and xi/chi functions");
  std::string eval_kind, eval_alpha = "1,1", eval_x, eval_y, eval_r, eval_s;
  std::string eval_what = "kernel", eval_flavor = "exact", eval_theta = "1";
  int eval_degree = 0, eval_N = -1, eval_d = 2;
  eval->add_option("--kind", eval_kind, "jacobi|hahn|ranked|pd|esf")->required();
  eval->add_option("--alpha", eval_alpha, "comma list, rationals allowed");
  eval->add_option("--theta", eval_theta, "total parameter for ranked/pd/esf");
  eval->add_option("--d", eval_d, "dimension for ranked kernels");
  eval->add_option("--degree,-n", eval_degree, "kernel degree |n|");
  eval->add_option("--what", eval_what, "kernel|xi|chi");
  eval->add_option("--flavor", eval_flavor, "exact|float");
  eval->add_option("--x", eval_x, "first point (comma list)");
  eval->add_option("--y", eval_y, "second point (comma list)");
  eval->add_option("--r", eval_r, "first composition/partition");
  eval->add_option("--s", eval_s, "second composition/partition");
  eval->add_option("--N", eval_N, "total count for hahn/esf");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::string verify_suite, verify_alpha = "2,2,1", verify_out;
  std::uint64_t verify_seed = 20240601, verify_draws = 100000;
  int verify_N = 4, verify_maxn = 3;
  verify->add_option("--suite", verify_suite,
                     "orthogonality|gasper|zchain|hahn-mixture|pds-roundtrip")
      ->required();
  verify->add_option("--alpha", verify_alpha, "parameters for zchain");
  verify->add_option("--seed", verify_seed, "rng seed");
  verify->add_option("--draws", verify_draws, "Monte Carlo draws");
  verify->add_option("--N", verify_N, "discrete total");
  verify->add_option("--max-degree", verify_maxn, "kernel degree bound");
  verify->add_option("--out", verify_out, "report file (default stdout)");

  // ---- sample ----
  auto* sample = app.add_subcommand("sample", "draw seeded samples as CSV");
  std::string sample_target, sample_alpha = "1,1", sample_pmf = "1", sample_out;
  std::string sample_x, sample_y;
  double sample_theta = 1.0;
  std::uint64_t sample_seed = 1, sample_count = 100;
  int sample_N = 1, sample_trunc = 128;
  sample->add_option("--target", sample_target, "dirichlet|dm|pd|copula|zchain")->required();
  sample->add_option("--alpha", sample_alpha, "Dirichlet parameters");
  sample->add_option("--theta", sample_theta, "PD parameter");
  sample->add_option("--pmf", sample_pmf, "mixing pmf for copula");
  sample->add_option("--count", sample_count, "number of draws");
  sample->add_option("--seed", sample_seed, "rng seed");
  sample->add_option("--N", sample_N, "DM total count");
  sample->add_option("--truncation", sample_trunc, "PD atom truncation");
  sample->add_option("--x", sample_x, "first point for zchain");
  sample->add_option("--y", sample_y, "second point for zchain");
  sample->add_option("--out", sample_out, "output file (default stdout)");

  // ---- pds ----
  auto* pds = app.add_subcommand("pds", "positive-definite-sequence transforms");
  std::string pds_transform, pds_input, pds_out, pds_alpha = "1,1", pds_theta = "2";
  std::string pds_scan_kind = "hpds", pds_flavor;
  int pds_N = 4, pds_maxm = 8, pds_grid = 20, pds_nmax = -1, pds_trunc = -1;
  pds->add_option("--transform", pds_transform, "pmf2rho|rho2pmf|j2h|bernstein|scan")
      ->required();
  pds->add_option("--input", pds_input, "sequence JSON file")->required();
  pds->add_option("--theta", pds_theta, "total parameter |alpha|");
  pds->add_option("--alpha", pds_alpha, "d=2 pair for bernstein/scan");
  pds->add_option("--N", pds_N, "discrete total");
  pds->add_option("--max-m", pds_maxm, "pmf degrees for rho2pmf");
  pds->add_option("--grid", pds_grid, "JPDS grid resolution");
  pds->add_option("--nmax", pds_nmax, "output degrees for bernstein");
  pds->add_option("--truncation", pds_trunc, "series truncation for scans");
  pds->add_option("--scan-kind", pds_scan_kind, "hpds|jpds");
  pds->add_option("--flavor", pds_flavor, "force exact|float (default: input flavor)");
  pds->add_option("--out", pds_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) {
      std::cout << "# simplex-kernels v" << kVersion << " kind=" << eval_kind
                << " degree=" << eval_degree << " what=" << eval_what
                << " flavor=" << eval_flavor << "\n";
      bool exact = eval_flavor == "exact";
      if (eval_flavor != "exact" && eval_flavor != "float")
        throw std::invalid_argument("flavor must be exact or float");
      if (eval_kind == "jacobi") {
        if (exact) {
          DirichletParams<Rational> alpha(parse_rationals(eval_alpha));
          auto x = parse_rationals(eval_x), y = parse_rationals(eval_y);
          std::cout << to_string(eval_what == "xi"
                                     ? xi(alpha, eval_degree, x, y)
                                     : q_kernel(alpha, eval_degree, x, y).value)
                    << "\n";
        } else {
          DirichletParams<double> alpha(parse_doubles(eval_alpha));
          auto x = parse_doubles(eval_x), y = parse_doubles(eval_y);
          std::cout << (eval_what == "xi" ? xi(alpha, eval_degree, x, y)
                                          : q_kernel(alpha, eval_degree, x, y).value)
                    << "\n";
        }
      } else if (eval_kind == "hahn") {
        MultiIndex r = parse_multiindex(eval_r), s = parse_multiindex(eval_s);
        if (exact) {
          DirichletParams<Rational> alpha(parse_rationals(eval_alpha));
          HahnContext<Rational> ctx(alpha, total_degree(r));
          Rational v = eval_what == "xi"    ? xi_h(ctx, eval_degree, r, s)
                       : eval_what == "chi" ? chi_h(ctx, eval_degree, r, s)
                                            : h_kernel(ctx, eval_degree, r, s).value;
          std::cout << to_string(v) << "\n";
        } else {
          DirichletParams<double> alpha(parse_doubles(eval_alpha));
          HahnContext<double> ctx(alpha, total_degree(r));
          double v = eval_what == "xi"    ? xi_h(ctx, eval_degree, r, s)
                     : eval_what == "chi" ? chi_h(ctx, eval_degree, r, s)
                                          : h_kernel(ctx, eval_degree, r, s).value;
          std::cout << v << "\n";
        }
      } else if (eval_kind == "ranked") {
        if (exact) {
          Rational theta = parse_rational(eval_theta);
          auto x = parse_rationals(eval_x), y = parse_rationals(eval_y);
          std::cout << to_string(
                           eval_what == "xi"
                               ? xi_ranked(theta, eval_d, eval_degree, x, y)
                               : q_kernel_ranked(theta, eval_d, eval_degree, x, y).value)
                    << "\n";
        } else {
          double theta = to_double(parse_rational(eval_theta));
          auto x = parse_doubles(eval_x), y = parse_doubles(eval_y);
          std::cout << (eval_what == "xi"
                            ? xi_ranked(theta, eval_d, eval_degree, x, y)
                            : q_kernel_ranked(theta, eval_d, eval_degree, x, y).value)
                    << "\n";
        }
      } else if (eval_kind == "pd") {
        double theta = to_double(parse_rational(eval_theta));
        auto x = make_ranked(parse_doubles(eval_x));
        auto y = make_ranked(parse_doubles(eval_y));
        std::cout << (eval_what == "xi" ? xi_pd(theta, eval_degree, x, y)
                                        : q_kernel_pd(theta, eval_degree, x, y).value)
                  << "\n";
      } else if (eval_kind == "esf") {
        Partition r(std::vector<int>(parse_multiindex(eval_r)));
        Partition s(std::vector<int>(parse_multiindex(eval_s)));
        int N = eval_N >= 0 ? eval_N : r.total();
        if (exact) {
          Rational theta = parse_rational(eval_theta);
          std::cout << to_string(eval_what == "xi"
                                     ? xi_h_esf(theta, N, eval_degree, r, s)
                                     : h_kernel_esf(theta, N, eval_degree, r, s).value)
                    << "\n";
        } else {
          double theta = to_double(parse_rational(eval_theta));
          std::cout << (eval_what == "xi"
                            ? xi_h_esf(theta, N, eval_degree, r, s)
                            : h_kernel_esf(theta, N, eval_degree, r, s).value)
                    << "\n";
        }
      } else {
        throw std::invalid_argument("unknown eval kind: " + eval_kind);
      }
      return 0;
    }

    if (*verify) {
      std::vector<CheckRow> rows;
      std::string flavor = "exact";
      if (verify_suite == "orthogonality") {
        rows = suite_orthogonality(verify_maxn, verify_N);
      } else if (verify_suite == "gasper") {
        rows = suite_gasper(verify_N);
      } else if (verify_suite == "zchain") {
        rows = suite_zchain(parse_rationals(verify_alpha), verify_draws, verify_seed);
        flavor = "float";
      } else if (verify_suite == "hahn-mixture") {
        rows = suite_hahn_mixture(verify_draws, verify_seed);
        flavor = "float";
      } else if (verify_suite == "pds-roundtrip") {
        rows = suite_pds_roundtrip();
      } else {
        throw std::invalid_argument("unknown verify suite: " + verify_suite);
      }
      json rep = report_json("verify --suite " + verify_suite, verify_seed, flavor,
                             verify_maxn, rows);
      Output{verify_out.empty() ? std::nullopt : std::optional<std::string>(verify_out)}
          .write(rep.dump(2) + "\n");
      return rep["all_pass"].get<bool>() ? 0 : 1;
    }

    if (*sample) {
      std::ostringstream os;
      RngStream rng(sample_seed);
      if (sample_target == "dirichlet") {
        DirichletParams<double> alpha(parse_doubles(sample_alpha));
        std::vector<std::string> cols;
        for (int i = 1; i <= alpha.dim(); ++i) cols.push_back("x" + std::to_string(i));
        write_csv_header(os, sample_target, sample_seed, "alpha=" + sample_alpha, cols);
        for (std::uint64_t i = 0; i < sample_count; ++i) {
          auto x = sample_dirichlet(alpha, rng);
          for (int c = 0; c < alpha.dim(); ++c) os << (c ? "," : "") << x[c];
          os << "\n";
        }
      } else if (sample_target == "dm") {
        DirichletParams<double> alpha(parse_doubles(sample_alpha));
        std::vector<std::string> cols;
        for (int i = 1; i <= alpha.dim(); ++i) cols.push_back("r" + std::to_string(i));
        write_csv_header(os, sample_target, sample_seed,
                         "alpha=" + sample_alpha + " N=" + std::to_string(sample_N), cols);
        for (std::uint64_t i = 0; i < sample_count; ++i) {
          auto r = sample_dm(alpha, sample_N, rng);
          for (size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << r[c];
          os << "\n";
        }
      } else if (sample_target == "pd") {
        const int keep = 16;
        std::vector<std::string> cols;
        for (int i = 1; i <= keep; ++i) cols.push_back("w" + std::to_string(i));
        cols.push_back("tail");
        write_csv_header(os, sample_target, sample_seed,
                         "theta=" + std::to_string(sample_theta), cols);
        for (std::uint64_t i = 0; i < sample_count; ++i) {
          auto w = sample_pd(sample_theta, sample_trunc, rng);
          double shown_tail = w.tail;
          for (size_t c = keep; c < w.weights.size(); ++c) shown_tail += w.weights[c];
          for (int c = 0; c < keep; ++c)
            os << (c ? "," : "")
               << (c < static_cast<int>(w.weights.size()) ? w.weights[c] : 0.0);
          os << "," << shown_tail << "\n";
        }
      } else if (sample_target == "copula") {
        DirichletParams<double> alpha(parse_doubles(sample_alpha));
        CopulaSpec spec(alpha, parse_doubles(sample_pmf));
        std::vector<std::string> cols;
        for (int i = 1; i <= alpha.dim(); ++i) cols.push_back("x" + std::to_string(i));
        for (int i = 1; i <= alpha.dim(); ++i) cols.push_back("y" + std::to_string(i));
        cols.push_back("m");
        write_csv_header(os, sample_target, sample_seed,
                         "alpha=" + sample_alpha + " pmf=" + sample_pmf, cols);
        for (std::uint64_t i = 0; i < sample_count; ++i) {
          auto s = sample_pair(spec, rng);
          for (int c = 0; c < alpha.dim(); ++c) os << (c ? "," : "") << s.x[c];
          for (int c = 0; c < alpha.dim(); ++c) os << "," << s.y[c];
          os << "," << s.m << "\n";
        }
      } else if (sample_target == "zchain") {
        DirichletParams<double> alpha(parse_doubles(sample_alpha));
        auto x = parse_doubles(sample_x), y = parse_doubles(sample_y);
        write_csv_header(os, sample_target, sample_seed,
                         "alpha=" + sample_alpha + " x=" + sample_x + " y=" + sample_y,
                         {"z"});
        for (std::uint64_t i = 0; i < sample_count; ++i)
          os << sample_z_chain(alpha, x, y, rng) << "\n";
      } else {
        throw std::invalid_argument("unknown sample target: " + sample_target);
      }
      Output{sample_out.empty() ? std::nullopt : std::optional<std::string>(sample_out)}
          .write(os.str());
      return 0;
    }

    if (*pds) {
      json in = load_json(pds_input);
      std::string flavor = pds_flavor.empty() ? in.value("flavor", "exact") : pds_flavor;
      bool exact = flavor == "exact";
      json out;
      if (pds_transform == "pmf2rho") {
        if (exact)
          out = sequence_to_json(
              pmf_to_jpds(parse_rational(pds_theta), sequence_from_json<Rational>(in)));
        else
          out = sequence_to_json(pmf_to_jpds(to_double(parse_rational(pds_theta)),
                                             sequence_from_json<double>(in)));
      } else if (pds_transform == "rho2pmf") {
        json result;
        result["schema"] = "simplex-kernels/pmf-inversion-v1";
        result["version"] = kVersion;
        result["flavor"] = flavor;
        if (exact) {
          auto inv = jpds_to_pmf(parse_rational(pds_theta),
                                 sequence_from_json<Rational>(in), pds_maxm);
          result["pmf"] = sequence_to_json(inv.pmf);
          result["sign_verdict"] = verdict_name(inv.sign_report.verdict);
          result["sign_witness"] = inv.sign_report.witness;
          result["converged"] = inv.converged;
          json dr = json::array();
          for (const auto& v : inv.derivative_route) dr.push_back(to_string(v));
          result["derivative_route"] = dr;
        } else {
          auto inv = jpds_to_pmf(to_double(parse_rational(pds_theta)),
                                 sequence_from_json<double>(in), pds_maxm);
          result["pmf"] = sequence_to_json(inv.pmf);
          result["sign_verdict"] = verdict_name(inv.sign_report.verdict);
          result["sign_witness"] = inv.sign_report.witness;
          result["converged"] = inv.converged;
          result["derivative_route"] = inv.derivative_route;
        }
        out = result;
      } else if (pds_transform == "j2h") {
        if (exact)
          out = sequence_to_json(jpds_to_hpds(parse_rational(pds_theta), pds_N,
                                              sequence_from_json<Rational>(in)));
        else
          out = sequence_to_json(jpds_to_hpds(to_double(parse_rational(pds_theta)), pds_N,
                                              sequence_from_json<double>(in)));
      } else if (pds_transform == "bernstein") {
        int nmax = pds_nmax >= 0 ? pds_nmax : std::min(pds_N, 8);
        if (exact) {
          auto ab = parse_rationals(pds_alpha);
          if (ab.size() != 2) throw std::invalid_argument("bernstein needs a d=2 alpha");
          out = sequence_to_json(
              bernstein_approx(ab[0], ab[1], sequence_from_json<Rational>(in), pds_N, nmax));
        } else {
          auto ab = parse_doubles(pds_alpha);
          if (ab.size() != 2) throw std::invalid_argument("bernstein needs a d=2 alpha");
          out = sequence_to_json(
              bernstein_approx(ab[0], ab[1], sequence_from_json<double>(in), pds_N, nmax));
        }
      } else if (pds_transform == "scan") {
        PositivityReport rep;
        if (exact) {
          DirichletParams<Rational> alpha(parse_rationals(pds_alpha));
          auto rho = sequence_from_json<Rational>(in);
          int trunc = pds_trunc >= 0 ? pds_trunc : rho.max_degree();
          rep = pds_scan_kind == "jpds" ? scan_jpds(alpha, rho, pds_grid, trunc)
                                        : scan_hpds(alpha, pds_N, rho);
        } else {
          DirichletParams<double> alpha(parse_doubles(pds_alpha));
          auto rho = sequence_from_json<double>(in);
          int trunc = pds_trunc >= 0 ? pds_trunc : rho.max_degree();
          rep = pds_scan_kind == "jpds" ? scan_jpds(alpha, rho, pds_grid, trunc)
                                        : scan_hpds(alpha, pds_N, rho);
        }
        out["schema"] = "simplex-kernels/scan-v1";
        out["version"] = kVersion;
        out["flavor"] = flavor;
        out["kind"] = pds_scan_kind;
        out["verdict"] = verdict_name(rep.verdict);
        out["witness"] = rep.witness;
        out["witness_value"] = rep.witness_value;
        out["truncation"] = rep.truncation;
        if (pds_scan_kind == "jpds") out["grid_resolution"] = pds_grid;
        if (pds_scan_kind == "hpds") out["N"] = pds_N;
      } else {
        throw std::invalid_argument("unknown pds transform: " + pds_transform);
      }
      Output{pds_out.empty() ? std::nullopt : std::optional<std::string>(pds_out)}.write(
          out.dump(2) + "\n");
      if (pds_transform == "scan" && out["verdict"] == "violated") return 1;
      return 0;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
