#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "dts/gbdt.hpp"
#include "dts/inverse.hpp"
#include "dts/io.hpp"
#include "dts/kernels.hpp"
#include "dts/szego.hpp"
#include "parallel.hpp"

namespace dts::cli {

namespace {

struct Global {
  unsigned threads = 1;
  std::uint64_t seed = 20240611;
  std::vector<std::string> tol_overrides;
  Tolerances tol;
};

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {re, 0.0};
    }
    const std::string a = text.substr(0, comma);
    const std::string b = text.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    const double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::logic_error&) {
    throw Error(Errc::InvalidArgument, "cannot parse complex number '" + text + "' (expected a,b)");
  }
}

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw Error(Errc::InvalidArgument, "bad entry '" + item + "' in list '" + text + "'");
    }
  }
  if (out.empty()) throw Error(Errc::InvalidArgument, "empty list");
  return out;
}

void apply_tolerances(Global& g) {
  for (const auto& kv : g.tol_overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::InvalidArgument, "--tol expects name=value, got '" + kv + "'");
    }
    double v = 0.0;
    try {
      v = std::stod(kv.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw Error(Errc::InvalidArgument, "--tol value is not a number: '" + kv + "'");
    }
    g.tol.set(kv.substr(0, eq), v);
  }
}

int exit_code(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Validation: return kValidation;
    case ErrorCategory::Numerical: return kNumerical;
    case ErrorCategory::Io: return kIo;
  }
  return kNumerical;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// Writes to the named file, or to `fallback` when the path is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(Errc::Io, "cannot open '" + path + "' for writing");
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

// Either a triple (closed-form omega and moments) or a moments file (omega from the
// truncated moment series).
struct Source {
  MomentData moments;
  MatrixFunction omega;
  bool from_triple = false;
};

Source load_source(const std::string& path, Index k, const Tolerances& tol) {
  const io::Json j = io::read_json(path);
  Source s;
  if (j.is_object() && j.contains("A")) {
    const AdmissibleTriple t = io::triple_from_json(j, tol);
    s.moments = gbdt_moments(t, k);
    auto rw = std::make_shared<RationalWeyl>(t);
    s.omega = [rw](Complex z) { return rw->omega(z); };
    s.from_triple = true;
  } else {
    s.moments = io::moments_from_json(j, tol);
    if (s.moments.count() < k + 1) {
      throw Error(Errc::InsufficientMoments,
                  "moments file has " + std::to_string(s.moments.count()) + " blocks, need " +
                      std::to_string(k + 1));
    }
    s.omega = omega_from_phi(weyl_from_moments(s.moments));
  }
  return s;
}

AdmissibleTriple builtin_triple(const std::string& name, Index n, Index p, std::uint64_t seed) {
  if (name == "trivial") return trivial_triple(n, p);
  if (name == "example") return example_triple();
  if (name == "random") {
    std::mt19937_64 rng(seed);
    return random_triple(rng, n, p);
  }
  throw Error(Errc::InvalidArgument, "unknown builtin triple '" + name + "'");
}

void warn_proximity(Complex z, const Tolerances& tol, std::ostream& err) {
  if (std::abs(z - Complex(0.0, 2.0)) < tol.proximity) {
    err << "warning: zeta = " << z.real() << "," << z.imag()
        << " is within " << tol.proximity << " of the excluded point 2i\n";
  }
}

// ---- generate -------------------------------------------------------------

struct GenerateOpts {
  std::string input, builtin, output;
  Index n_blocks = 8, k = 8, n = 1, p = 1;
};

int cmd_generate(const GenerateOpts& o, const Global& g, std::ostream& out) {
  if (o.output.empty()) throw Error(Errc::InvalidArgument, "generate needs -o <prefix>");
  if (o.input.empty() == o.builtin.empty()) {
    throw Error(Errc::InvalidArgument, "give exactly one of -i <triple.json> or --builtin");
  }
  if (o.n_blocks < 1) throw Error(Errc::InvalidArgument, "--N must be at least 1");
  const AdmissibleTriple t = o.input.empty() ? builtin_triple(o.builtin, o.n, o.p, g.seed)
                                             : io::triple_from_json(io::read_json(o.input), g.tol);
  const GbdtIterates it = gbdt_iterate(t, o.n_blocks - 1, g.tol);
  const MomentData m = gbdt_moments(t, o.k);
  io::write_json(o.output + ".potential.json", io::potential_to_json(t.p(), it.c));
  io::write_json(o.output + ".moments.json", io::moments_to_json(m));
  if (!o.builtin.empty()) io::write_json(o.output + ".triple.json", io::triple_to_json(t));
  out << "triple: n=" << t.n() << " p=" << t.p() << " identity residual "
      << t.identity_residual() << "\n";
  out << "potential: " << it.c.size() << " blocks, max j-unitarity residual "
      << it.potential.max_residual() << "\n";
  out << "moments: s_0..s_-" << o.k << ", At identity residual "
      << RationalWeyl(t).identity_residual() << "\n";
  return kOk;
}

// ---- verify ---------------------------------------------------------------

struct VerifyOpts {
  std::string input, spectrum;
  Index n_blocks = 0;
};

int cmd_verify(const VerifyOpts& o, const Global& g, std::ostream& out) {
  const MomentData m = io::moments_from_json(io::read_json(o.input), g.tol);
  const Index n = o.n_blocks > 0 ? o.n_blocks : m.count();
  const ToeplitzSystem t = assemble(m, n, g.tol);
  const PositivityVerdict v = positivity_check(t);
  const double disp = t.displacement_residual();
  out << "order N=" << n << " p=" << m.p << "\n";
  out << "positivity: " << (v.positive ? "pass" : "FAIL") << " (min pivot " << v.min_pivot;
  if (v.failing_index) out << ", first failing pivot " << *v.failing_index;
  out << ")\n";
  const bool disp_ok = disp <= g.tol.displacement;
  out << "displacement residual: " << disp << " " << (disp_ok ? "pass" : "FAIL") << "\n";
  if (!o.spectrum.empty()) {
    Sink sink(o.spectrum, out);
    *sink << "index,eigenvalue\n";
    const Eigen::VectorXd ev = spectrum(t);
    for (Index i = 0; i < ev.size(); ++i) *sink << i << "," << fmt(ev(i)) << "\n";
  }
  return v.positive && disp_ok ? kOk : kValidation;
}

// ---- inverse --------------------------------------------------------------

struct InverseOpts {
  std::string input, output;
  Index n_blocks = 0;
  std::vector<std::string> probes;
};

int cmd_inverse(const InverseOpts& o, const Global& g, std::ostream& out, std::ostream& err) {
  const MomentData m = io::moments_from_json(io::read_json(o.input), g.tol);
  const Index n = o.n_blocks > 0 ? o.n_blocks : m.count();
  std::array<Complex, 2> probes = kDefaultProbes;
  if (!o.probes.empty()) {
    if (o.probes.size() != 2) throw Error(Errc::InvalidArgument, "--probes takes two values");
    probes = {parse_complex(o.probes[0]), parse_complex(o.probes[1])};
  }
  const RecoveryReport rep = recover_potential(m, n - 1, probes, g.tol);
  out << "k,probe_residual,unitarity_residual\n";
  for (std::size_t k = 0; k < rep.probe_residuals.size(); ++k) {
    out << k << "," << fmt(rep.probe_residuals[k]) << "," << fmt(rep.unitarity_residuals[k]) << "\n";
  }
  for (const auto& w : rep.warnings.entries) err << "warning: " << w << "\n";
  if (!o.output.empty()) {
    io::write_json(o.output, io::potential_to_json(m.p, rep.potential.blocks()));
  }
  if (!rep.complete()) {
    err << "error: recovery stopped at step " << *rep.stopped_at << ": " << rep.diagnostic << "\n";
    return kValidation;
  }
  return kOk;
}

// ---- cd-check -------------------------------------------------------------

struct CdOpts {
  std::string input;
  Index trials = 100;
};

int cmd_cd_check(const CdOpts& o, const Global& g, std::ostream& out) {
  const Potential pot = io::potential_from_json(io::read_json(o.input), g.tol);
  if (pot.empty()) throw Error(Errc::InvalidArgument, "potential has no blocks");
  const Index n = pot.size() - 1;
  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::vector<std::pair<Complex, Complex>> pairs;
  while (static_cast<Index>(pairs.size()) < o.trials) {
    const Complex l(coord(rng), coord(rng));
    const Complex mu(coord(rng), coord(rng));
    if (std::abs(l) < 0.5 || std::abs(mu) < 0.5) continue;
    if (std::abs(1.0 + l * mu) < 0.1 || std::abs(l - mu) < 0.1) continue;
    pairs.emplace_back(l, mu);
  }
  std::vector<double> res(pairs.size());
  parallel_for(pairs.size(), g.threads,
               [&](std::size_t i) { res[i] = cd_residual(pot, pairs[i].first, pairs[i].second, n); });
  double worst = 0.0;
  for (const double r : res) worst = std::max(worst, r);
  const bool ok = worst <= g.tol.cd;
  out << "trials=" << o.trials << " N=" << n << " max residual " << worst << " "
      << (ok ? "pass" : "FAIL") << "\n";
  return ok ? kOk : kValidation;
}

// ---- kernel-sweep / disk-sweep --------------------------------------------

struct SweepOpts {
  std::string input, output, format = "table";
  std::vector<std::string> zetas{"0,1"}, xis;
  Index kmax = 10, grid = 4096;
};

std::optional<OuterFactor> try_outer(const Source& s, Index grid, const Tolerances& tol,
                                     std::ostream& err) {
  if (s.moments.p != 1) return std::nullopt;
  try {
    return outer_factor_scalar(density_from_omega(s.omega), grid, tol);
  } catch (const Error& e) {
    err << "warning: no asymptotic target: " << e.what() << "\n";
    return std::nullopt;
  }
}

int cmd_kernel_sweep(const SweepOpts& o, const Global& g, std::ostream& out, std::ostream& err) {
  if (o.format != "table" && o.format != "blocks") {
    throw Error(Errc::InvalidArgument, "--format must be table or blocks");
  }
  const Source s = load_source(o.input, o.kmax, g.tol);
  const ToeplitzSystem t = assemble(s.moments, o.kmax, g.tol);
  std::vector<Complex> zetas, xis;
  for (const auto& z : o.zetas) zetas.push_back(parse_complex(z));
  for (const auto& x : (o.xis.empty() ? o.zetas : o.xis)) xis.push_back(parse_complex(x));
  for (const Complex z : zetas) warn_proximity(z, g.tol, err);
  for (const Complex x : xis) warn_proximity(x, g.tol, err);

  const std::optional<OuterFactor> outer = try_outer(s, o.grid, g.tol, err);
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t a = 0; a < zetas.size(); ++a) {
    for (std::size_t b = 0; b < xis.size(); ++b) jobs.emplace_back(a, b);
  }
  std::vector<std::vector<ConvergenceRow>> results(jobs.size());
  parallel_for(jobs.size(), g.threads, [&](std::size_t i) {
    results[i] = convergence_report(t, &s.omega, outer ? &*outer : nullptr, zetas[jobs[i].first],
                                    xis[jobs[i].second], o.kmax, g.tol);
  });

  Sink sink(o.output, out);
  const Index p = s.moments.p;
  if (o.format == "table") {
    *sink << "k,zeta_re,zeta_im,xi_re,xi_im,m22_re,m22_im,m_error,trace_lambda_l,trace_lambda_r,"
             "lambda_r_error,near_2i\n";
  } else {
    *sink << "k,zeta_re,zeta_im,xi_re,xi_im,block,row,col,re,im\n";
  }
  static const char* kBlockNames[2][2] = {{"M11", "M12"}, {"M21", "M22"}};
  for (Index k = 1; k <= o.kmax; ++k) {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const ConvergenceRow& r = results[i][static_cast<std::size_t>(k - 1)];
      const Complex z = zetas[jobs[i].first];
      const Complex x = xis[jobs[i].second];
      const std::string head = std::to_string(k) + "," + fmt(z.real()) + "," + fmt(z.imag()) + "," +
                               fmt(x.real()) + "," + fmt(x.imag());
      if (o.format == "table") {
        const Complex m22 = r.m(p, p);
        *sink << head << "," << fmt(m22.real()) << "," << fmt(m22.imag()) << "," << fmt(r.m_error)
              << "," << fmt(r.trace_lambda_l) << "," << fmt(r.trace_lambda_r) << ","
              << fmt(r.lambda_r_error) << "," << (r.near_excluded ? 1 : 0) << "\n";
      } else {
        for (int bi = 0; bi < 2; ++bi) {
          for (int bk = 0; bk < 2; ++bk) {
            for (Index a = 0; a < p; ++a) {
              for (Index b = 0; b < p; ++b) {
                const Complex v = r.m(bi * p + a, bk * p + b);
                *sink << head << "," << kBlockNames[bi][bk] << "," << a << "," << b << ","
                      << fmt(v.real()) << "," << fmt(v.imag()) << "\n";
              }
            }
          }
        }
      }
    }
  }
  return kOk;
}

int cmd_disk_sweep(const SweepOpts& o, const Global& g, std::ostream& out, std::ostream& err) {
  const Source s = load_source(o.input, o.kmax, g.tol);
  const ToeplitzSystem t = assemble(s.moments, o.kmax, g.tol);
  std::vector<Complex> zetas;
  for (const auto& z : o.zetas) zetas.push_back(parse_complex(z));
  for (const Complex z : zetas) warn_proximity(z, g.tol, err);

  struct Row {
    double tl = 0.0, tr = 0.0, u = 0.0;
  };
  std::vector<std::vector<Row>> rows(zetas.size(), std::vector<Row>(static_cast<std::size_t>(o.kmax)));
  parallel_for(zetas.size(), g.threads, [&](std::size_t i) {
    const CMatrix w = s.omega(zetas[i]);
    for (Index k = 1; k <= o.kmax; ++k) {
      const ToeplitzSystem sys = k == t.blocks() ? t : t.leading(k);
      const WeylDisk d = weyl_disk(sys, zetas[i], g.tol);
      Row& r = rows[i][static_cast<std::size_t>(k - 1)];
      r.tl = d.lambda_l.trace().real();
      r.tr = d.lambda_r.trace().real();
      r.u = spectral_norm(d.contraction(w));
    }
  });
  Sink sink(o.output, out);
  *sink << "N,zeta_re,zeta_im,trace_lambda_l,trace_lambda_r,u_norm,contains\n";
  for (Index k = 1; k <= o.kmax; ++k) {
    for (std::size_t i = 0; i < zetas.size(); ++i) {
      const Row& r = rows[i][static_cast<std::size_t>(k - 1)];
      *sink << k << "," << fmt(zetas[i].real()) << "," << fmt(zetas[i].imag()) << "," << fmt(r.tl)
            << "," << fmt(r.tr) << "," << fmt(r.u) << ","
            << (r.u <= 1.0 + g.tol.membership ? 1 : 0) << "\n";
    }
  }
  return kOk;
}

// ---- factorize ------------------------------------------------------------

int cmd_factorize(const SweepOpts& o, const Global& g, std::ostream& out) {
  const Source s = load_source(o.input, 0, g.tol);
  if (s.moments.p != 1) throw Error(Errc::ShapeMismatch, "factorize supports p = 1 only");
  const DensityFunction dens = density_from_omega(s.omega);
  const double integral = szego_integral(dens, o.grid);
  const OuterFactor gf = outer_factor_scalar(dens, o.grid, g.tol);
  io::Json theta = io::Json::array(), logw = io::Json::array(), gb = io::Json::array();
  const auto bv = gf.boundary_values();
  for (Index m = 0; m < gf.samples(); ++m) {
    const auto i = static_cast<std::size_t>(m);
    theta.push_back(gf.theta()[i]);
    logw.push_back(gf.log_w()[i]);
    gb.push_back({bv[i].real(), bv[i].imag()});
  }
  const io::Json j{{"M", o.grid}, {"theta", theta}, {"logW", logw}, {"G_boundary", gb}};
  if (!o.output.empty()) io::write_json(o.output, j);
  out << "szego integral " << fmt(integral) << "\n";
  out << "boundary error max | |G|^2 / tau' - 1 | = " << gf.boundary_error() << "\n";
  return kOk;
}

// ---- bench ----------------------------------------------------------------

struct BenchOpts {
  std::string input, output, sizes = "256,1024,4096";
  Index n = 1, p = 1, reps = 5;
};

int cmd_bench(const BenchOpts& o, const Global& g, std::ostream& out, std::ostream& err) {
  const AdmissibleTriple t = o.input.empty()
                                 ? (o.n == 1 && o.p == 1 ? example_triple()
                                                         : builtin_triple("random", o.n, o.p, g.seed))
                                 : io::triple_from_json(io::read_json(o.input), g.tol);
  const std::vector<Index> sizes = parse_index_list(o.sizes);
  Index nmax = 0;
  for (const Index n : sizes) nmax = std::max(nmax, n);
  const MomentData m = gbdt_moments(t, nmax);
  const SemiseparableGenerators gen = semiseparable_generators(t);
  std::mt19937_64 rng(g.seed);
  std::normal_distribution<double> dist;
  using Clock = std::chrono::steady_clock;

  Sink sink(o.output, out);
  *sink << "N,n,p,reps,dense_seconds,fast_seconds,speedup,rel_diff\n";
  for (const Index n : sizes) {
    const CMatrix s = toeplitz_matrix(m, n);
    CVector x(n * t.p());
    for (Index i = 0; i < x.size(); ++i) x(i) = Complex(dist(rng), dist(rng));
    const CVector yd = s * x;
    const CVector yf = semiseparable_matvec(gen, m.s[0], n, x);
    const double diff = (yd - yf).norm() / yd.norm();
    if (!(diff <= 1e-9)) {
      err << "error: fast and dense products differ by " << diff << " at N=" << n << "\n";
      return kNumerical;
    }
    double best_dense = std::numeric_limits<double>::infinity();
    double best_fast = best_dense;
    CVector sinkv(x.size());
    for (Index r = 0; r < o.reps; ++r) {
      auto t0 = Clock::now();
      sinkv.noalias() = s * x;
      auto t1 = Clock::now();
      best_dense = std::min(best_dense, std::chrono::duration<double>(t1 - t0).count());
      t0 = Clock::now();
      sinkv = semiseparable_matvec(gen, m.s[0], n, x);
      t1 = Clock::now();
      best_fast = std::min(best_fast, std::chrono::duration<double>(t1 - t0).count());
    }
    *sink << n << "," << t.n() << "," << t.p() << "," << o.reps << "," << fmt(best_dense) << ","
          << fmt(best_fast) << "," << fmt(best_dense / best_fast) << "," << fmt(diff) << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete Dirac systems and block Toeplitz matrices", "dts"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--threads", g.threads, "worker threads for grid evaluations")
      ->check(CLI::Range(1u, 256u));
  app.add_option("--seed", g.seed, "seed for randomized trials and builtin triples");
  app.add_option("--tol", g.tol_overrides, "override a tolerance, name=value (repeatable)");

  GenerateOpts gen;
  auto* c_gen = app.add_subcommand("generate", "triple -> <prefix>.potential.json, <prefix>.moments.json");
  c_gen->add_option("-i,--input", gen.input, "triple JSON");
  c_gen->add_option("--builtin", gen.builtin, "trivial | example | random (also writes <prefix>.triple.json)");
  c_gen->add_option("--n", gen.n, "internal dimension for builtin triples");
  c_gen->add_option("--p", gen.p, "block size for builtin triples");
  c_gen->add_option("--N", gen.n_blocks, "number of potential blocks C_0..C_{N-1}");
  c_gen->add_option("--K", gen.k, "moments s_0..s_-K");
  c_gen->add_option("-o,--output", gen.output, "output prefix")->required();

  VerifyOpts ver;
  auto* c_ver = app.add_subcommand("verify", "positivity and displacement identity of S(N)");
  c_ver->add_option("-i,--input", ver.input, "moments JSON")->required();
  c_ver->add_option("--N", ver.n_blocks, "order (default: all moments)");
  c_ver->add_option("--spectrum", ver.spectrum, "write eigenvalues of S(N) as CSV (index,eigenvalue)");

  InverseOpts inv;
  auto* c_inv = app.add_subcommand("inverse", "recover C_0..C_{N-1} from moments");
  c_inv->add_option("-i,--input", inv.input, "moments JSON")->required();
  c_inv->add_option("-o,--output", inv.output, "potential JSON to write");
  c_inv->add_option("--N", inv.n_blocks, "number of blocks (default: all moments)");
  c_inv->add_option("--probes", inv.probes, "two probes a,b (default 0,6 0,8)")->expected(2);

  CdOpts cd;
  auto* c_cd = app.add_subcommand("cd-check", "Christoffel-Darboux residual over random pairs");
  c_cd->add_option("-i,--input", cd.input, "potential JSON")->required();
  c_cd->add_option("--trials", cd.trials, "number of random (lambda, mu) pairs");

  SweepOpts ks;
  auto* c_ks = app.add_subcommand(
      "kernel-sweep",
      "CSV of M(k, zeta, conj xi) and its limit. table columns: k,zeta_re,zeta_im,xi_re,xi_im,"
      "m22_re,m22_im,m_error,trace_lambda_l,trace_lambda_r,lambda_r_error,near_2i; blocks "
      "columns: k,zeta_re,zeta_im,xi_re,xi_im,block,row,col,re,im");
  c_ks->add_option("-i,--input", ks.input, "triple or moments JSON")->required();
  c_ks->add_option("-o,--output", ks.output, "CSV path (default stdout)");
  c_ks->add_option("--zeta", ks.zetas, "zeta as a,b (repeatable)");
  c_ks->add_option("--xi", ks.xis, "xi as a,b (repeatable; default: the zeta list)");
  c_ks->add_option("--kmax", ks.kmax, "largest order");
  c_ks->add_option("--grid", ks.grid, "outer factor grid size M");
  c_ks->add_option("--format", ks.format, "table | blocks");

  SweepOpts ds;
  auto* c_ds = app.add_subcommand(
      "disk-sweep", "CSV of Weyl disks. columns: N,zeta_re,zeta_im,trace_lambda_l,trace_lambda_r,u_norm,contains");
  c_ds->add_option("-i,--input", ds.input, "triple or moments JSON")->required();
  c_ds->add_option("-o,--output", ds.output, "CSV path (default stdout)");
  c_ds->add_option("--zeta", ds.zetas, "zeta as a,b (repeatable)");
  c_ds->add_option("--kmax", ds.kmax, "largest order");

  SweepOpts fz;
  auto* c_fz = app.add_subcommand("factorize", "Szego integral and scalar outer factor");
  c_fz->add_option("-i,--input", fz.input, "triple or moments JSON (p = 1)")->required();
  c_fz->add_option("-o,--output", fz.output, "JSON {M, theta, logW, G_boundary}");
  c_fz->add_option("--grid", fz.grid, "grid size M");

  BenchOpts bo;
  auto* c_bench = app.add_subcommand(
      "bench", "dense vs semiseparable matvec. columns: N,n,p,reps,dense_seconds,fast_seconds,speedup,rel_diff");
  c_bench->add_option("-i,--input", bo.input, "triple JSON (default: builtin)");
  c_bench->add_option("-o,--output", bo.output, "CSV path (default stdout)");
  c_bench->add_option("--n", bo.n, "internal dimension of the random triple");
  c_bench->add_option("--p", bo.p, "block size of the random triple");
  c_bench->add_option("--N", bo.sizes, "comma-separated orders");
  c_bench->add_option("--reps", bo.reps, "repetitions (best time is kept)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    apply_tolerances(g);
    if (*c_gen) return cmd_generate(gen, g, out);
    if (*c_ver) return cmd_verify(ver, g, out);
    if (*c_inv) return cmd_inverse(inv, g, out, err);
    if (*c_cd) return cmd_cd_check(cd, g, out);
    if (*c_ks) return cmd_kernel_sweep(ks, g, out, err);
    if (*c_ds) return cmd_disk_sweep(ds, g, out, err);
    if (*c_fz) return cmd_factorize(fz, g, out);
    if (*c_bench) return cmd_bench(bo, g, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kValidation;
}

}  // namespace dts::cli
