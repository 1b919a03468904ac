#include "kml/suite/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "kml/errors.hpp"
#include "kml/multipliers.hpp"
#include "kml/random.hpp"
#include "kml/rkbs.hpp"
#include "kml/rkhs.hpp"
#include "kml/sip.hpp"
#include "kml/suite/fixtures.hpp"

namespace kml::suite {

using nlohmann::json;

std::size_t worker_count() {
  if (const char* env = std::getenv("KML_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHilbertMinRatio = 1e-4;

using Instance = std::function<double(Rng&, std::size_t)>;

struct Check {
  std::string name;
  std::string anchor;
  double tolerance;
  std::size_t count;
  Instance instance;
};

class Runner {
 public:
  explicit Runner(const SuiteConfig& cfg) : cfg_(cfg), workers_(worker_count()) {}

  void check(const std::string& suite, Check c) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string name = suite + "/" + c.name;
    const std::uint64_t stream = stream_id(name);
    std::vector<double> residuals(c.count, 0.0);
    parallel_for(c.count, workers_, [&](std::size_t i) {
      Rng rng(derive_seed(cfg_.seed, stream, i));
      try {
        const double r = c.instance(rng, i);
        residuals[i] = std::isnan(r) ? kInf : r;
      } catch (const std::exception&) {
        residuals[i] = kInf;
      }
    });
    CheckRecord rec;
    rec.name = name;
    rec.paper_anchor = std::move(c.anchor);
    rec.instances = c.count;
    rec.max_residual = residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
    rec.tolerance = cfg_.tol.value_or(c.tolerance);
    rec.pass = rec.max_residual <= rec.tolerance;
    rec.wall_ms = elapsed_ms(t0);
    report_.records.push_back(std::move(rec));
  }

  void probe(const std::string& suite, const std::string& name, const std::string& anchor,
             std::size_t instances, const std::function<json(std::uint64_t)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string full = suite + "/" + name;
    Finding f;
    f.record.name = full;
    f.record.paper_anchor = anchor;
    f.record.instances = instances;
    try {
      f.details = body(derive_seed(cfg_.seed, stream_id(full), 0));
      f.record.pass = true;
    } catch (const std::exception& e) {
      f.details = json{{"error", e.what()}};
      f.record.pass = false;
    }
    f.record.wall_ms = elapsed_ms(t0);
    report_.findings.push_back(std::move(f));
  }

  const SuiteConfig& cfg() const { return cfg_; }
  SuiteReport take() {
    report_.config = cfg_;
    return std::move(report_);
  }

 private:
  static double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }

  const SuiteConfig& cfg_;
  std::size_t workers_;
  SuiteReport report_;
};

fixtures::KernelParams kernel_params(const SuiteConfig& cfg) {
  return {cfg.gamma, cfg.degree, cfg.offset};
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

Scalar random_nonzero(Rng& rng) {
  Scalar c = rng.complex_normal();
  while (std::abs(c) < 1e-3) c = rng.complex_normal();
  return c;
}

// ---------------------------------------------------------------------------

void rkhs_core(Runner& run) {
  const auto& cfg = run.cfg();
  const std::string suite = "rkhs-core";
  const std::size_t max_m = cfg.points ? cfg.points : 25;
  const auto params = kernel_params(cfg);

  const auto base_for = [&](Rng& rng, std::size_t i) {
    const auto spec = fixtures::kernel_for_instance(cfg.kernel, i, params);
    const std::size_t m = pick(rng, 1, max_m);
    return RkhsBase::create(spec, fixtures::random_points(rng, spec, m));
  };

  run.check(suite, {"reproducing-property", "f(y) = <f, k_y>", 1e-9, cfg.trials,
                    [&](Rng& rng, std::size_t i) {
                      const auto base = base_for(rng, i);
                      const SpanFunction f(base, rng.complex_vector(static_cast<Eigen::Index>(base->size())));
                      double worst = 0.0;
                      for (const auto& y : base->points())
                        worst = std::max(worst, reproducing_residual(f, y));
                      return worst / (1.0 + norm(f));
                    }});

  run.check(suite, {"kernel-inner-product", "K(x, y) = k_y(x) = <k_y, k_x>", 1e-12, cfg.trials,
                    [&](Rng& rng, std::size_t i) {
                      const auto base = base_for(rng, i);
                      const auto& xs = base->points();
                      double worst = 0.0;
                      for (std::size_t a = 0; a < base->size(); ++a) {
                        for (std::size_t b = 0; b < base->size(); ++b) {
                          const Scalar lhs = inner(SpanFunction::section(base, a), SpanFunction::section(base, b));
                          const Scalar k = eval_kernel(*base->kernel(), xs[b], xs[a]);
                          worst = std::max(worst, std::abs(lhs - k) / (1.0 + std::abs(k)));
                        }
                      }
                      return worst;
                    }});

  run.check(suite, {"evaluation-functional-norm", "||E_y||^2 = ||k_y||^2 = K(y, y)", 1e-12,
                    cfg.trials, [&](Rng& rng, std::size_t i) {
                      const auto base = base_for(rng, i);
                      const auto& spec = *base->kernel();
                      double worst = 0.0;
                      for (std::size_t a = 0; a < base->size(); ++a) {
                        const auto& y = base->points()[a];
                        const double e = eval_functional_norm(spec, y);
                        const double k = eval_kernel(spec, y, y).real();
                        const double section_norm = norm(SpanFunction::section(base, a));
                        worst = std::max({worst, std::abs(e - section_norm) / (1.0 + e),
                                          std::abs(e * e - k) / (1.0 + k)});
                      }
                      return worst;
                    }});

  run.check(suite, {"inner-product-axioms", "<f, g> = conj(<g, f>), <f, f> >= 0, |<f, g>|^2 <= <f, f><g, g>",
                    1e-12, cfg.trials, [&](Rng& rng, std::size_t i) {
                      const auto base = base_for(rng, i);
                      const auto m = static_cast<Eigen::Index>(base->size());
                      const SpanFunction f(base, rng.complex_vector(m));
                      const SpanFunction g(base, rng.complex_vector(m));
                      const Matrix& gm = base->gram().matrix();
                      const double scale = (f.coeffs().cwiseAbs().transpose() * gm.cwiseAbs() *
                                            g.coeffs().cwiseAbs())(0);
                      const Scalar fg = inner(f, g);
                      const double symmetry = std::abs(fg - std::conj(inner(g, f))) / scale;
                      const double ff = inner(f, f).real();
                      const double gg = inner(g, g).real();
                      const double pos_slack = 1e-10 * f.coeffs().squaredNorm() * linalg::max_abs(gm);
                      const double positivity = std::max(0.0, -ff - pos_slack) / (1.0 + pos_slack);
                      const double cs_bound = ff * gg * (1.0 + 1e-9);
                      const double cs = std::max(0.0, std::norm(fg) - cs_bound) / (1.0 + cs_bound);
                      return std::max({symmetry, positivity, cs});
                    }});
}

// ---------------------------------------------------------------------------

struct HilbertInstance {
  GramMatrix g;
  PointFunction f;
};

void hilbert_multipliers(Runner& run) {
  const auto& cfg = run.cfg();
  const std::string suite = "hilbert-multipliers";
  const std::size_t max_m = cfg.points ? cfg.points : 10;
  const auto params = kernel_params(cfg);

  const auto gram_for = [&](Rng& rng, std::size_t i) {
    static constexpr std::array<const char*, 3> families = {"gaussian", "laplacian", "brownian-min"};
    const KernelSpec spec = cfg.kernel == "mixed" ? fixtures::kernel_named(families[i % 3], params)
                                                  : fixtures::kernel_named(cfg.kernel, params);
    std::size_t cap = max_m;
    if (const auto* poly = std::get_if<Polynomial>(&spec.variant())) {
      // dimension of degree-k polynomials in two variables
      cap = std::min<std::size_t>(cap, static_cast<std::size_t>((poly->degree + 1) * (poly->degree + 2) / 2));
    }
    const std::size_t m = pick(rng, std::min<std::size_t>(2, cap), cap);
    // cond(G) <= 1e4 keeps solve-based residuals well inside 1e-9
    return fixtures::well_conditioned_gram(rng, spec, m, kHilbertMinRatio);
  };
  const auto instance_for = [&](Rng& rng, std::size_t i) {
    auto g = gram_for(rng, i);
    auto f = fixtures::random_function(rng, g.points());
    return HilbertInstance{std::move(g), std::move(f)};
  };

  run.check(suite, {"adjoint-identity", "M_f^*(k_y) = conj(f(y)) k_y", 1e-9, cfg.trials,
                    [&](Rng& rng, std::size_t i) {
                      const auto in = instance_for(rng, i);
                      const double scale = (1.0 + in.f.sup_norm()) * linalg::spectral_norm(in.g.matrix());
                      return adjoint_identity_check(in.f, in.g) / scale;
                    }});

  run.check(suite, {"norm-oracle-agreement", "||M_f|| <= c iff c^2 G - F G F^H >= 0", 1e-6,
                    cfg.trials, [&](Rng& rng, std::size_t i) {
                      const auto in = instance_for(rng, i);
                      const double eig = multiplier_norm_eig(in.f, in.g).bound;
                      const double bis = multiplier_norm_bisect(in.f, in.g, 1e-10).bound;
                      return std::abs(eig - bis) / (1.0 + eig);
                    }});

  run.check(suite, {"constant-multiplier-norm", "M_c = c I", 1e-12, cfg.trials,
                    [&](Rng& rng, std::size_t i) {
                      const auto g = gram_for(rng, i);
                      const Scalar c = random_nonzero(rng);
                      const double b = multiplier_norm_eig(PointFunction::constant(g.points(), c), g).bound;
                      return std::abs(b - std::abs(c)) / std::abs(c);
                    }});

  run.check(suite, {"certificate-soundness", "(c + tol)^2 G - F G F^H >= 0", 1.0, cfg.trials,
                    [&](Rng& rng, std::size_t i) {
                      const auto in = instance_for(rng, i);
                      const double bracket = 1e-10;
                      const auto cert = multiplier_norm_bisect(in.f, in.g, bracket);
                      const double c = cert.bound + bracket;
                      const double floor = multiplier_psd_floor(in.f, in.g, c);
                      return std::max(0.0, -floor) / multiplier_psd_tolerance(in.f, in.g, c);
                    }});

  run.check(suite, {"representation-axioms-hilbert", "pi_H(f, h) = M_f(h) = f h", 1e-9, cfg.trials,
                    [&](Rng& rng, std::size_t i) {
                      const auto g = gram_for(rng, i);
                      const auto base = RkhsBase::create(g);
                      const auto m = static_cast<Eigen::Index>(g.size());
                      const auto f1 = fixtures::random_function(rng, g.points());
                      const auto f2 = fixtures::random_function(rng, g.points());
                      const SpanFunction h1(base, rng.complex_vector(m));
                      const SpanFunction h2(base, rng.complex_vector(m));
                      const Scalar a = rng.complex_normal();
                      const Scalar b = rng.complex_normal();
                      return representation_check_hilbert(f1, f2, h1, h2, a, b).max();
                    }});

  run.check(suite, {"submultiplicativity", "M(H) is an algebra", 1e-9, cfg.trials,
                    [&](Rng& rng, std::size_t i) {
                      const auto g = gram_for(rng, i);
                      const auto f1 = fixtures::random_function(rng, g.points());
                      const auto f2 = fixtures::random_function(rng, g.points());
                      const double n1 = multiplier_norm_eig(f1, g).bound;
                      const double n2 = multiplier_norm_eig(f2, g).bound;
                      const double n12 = multiplier_norm_eig(f1 * f2, g).bound;
                      return std::max(0.0, n12 - n1 * n2) / (n1 * n2);
                    }});

  run.check(suite, {"scaling-covariance", "||M_{lambda f}|| = |lambda| ||M_f||", 1e-9, cfg.trials,
                    [&](Rng& rng, std::size_t i) {
                      const auto in = instance_for(rng, i);
                      const Scalar lambda = random_nonzero(rng);
                      const double base = multiplier_norm_eig(in.f, in.g).bound;
                      const double scaled = multiplier_norm_eig(lambda * in.f, in.g).bound;
                      return std::abs(scaled - std::abs(lambda) * base) / (std::abs(lambda) * base);
                    }});

  run.check(suite, {"two-space-reduction", "M(H, H) = M(H)", 1e-9, cfg.trials,
                    [&](Rng& rng, std::size_t i) {
                      const auto in = instance_for(rng, i);
                      const double one = multiplier_norm_eig(in.f, in.g).bound;
                      const auto two = multiplier_norm_two(in.f, in.g, in.g);
                      if (!two.feasible) return kInf;
                      return std::abs(two.bound - one) / (1.0 + one);
                    }});
}

// ---------------------------------------------------------------------------

void sip_core(Runner& run) {
  const auto& cfg = run.cfg();
  const std::string suite = "sip-core";
  const std::size_t max_n = cfg.features ? cfg.features : 8;
  const std::size_t count = cfg.trials * cfg.p.size();
  const auto space_for = [&](Rng& rng, std::size_t i) {
    return SipSpace(pick(rng, 1, max_n), cfg.p[i % cfg.p.size()]);
  };

  run.check(suite, {"sip-axioms", "[., .] semi-inner product", 1e-9, count,
                    [&](Rng& rng, std::size_t i) {
                      const auto space = space_for(rng, i);
                      return sip_axioms_check(space, 1, rng.next()).max();
                    }});

  run.check(suite, {"riesz-representation", "g(f) = [f, h], ||g|| = ||h||", 1e-9, count,
                    [&](Rng& rng, std::size_t i) {
                      const auto space = space_for(rng, i);
                      const DualFunctional g(rng.complex_vector(static_cast<Eigen::Index>(space.dim())));
                      const auto rep = riesz_check(space, g, 10, rng.next());
                      return std::max(rep.max_pairing_residual,
                                      rep.norm_residual / (1.0 + lp_norm(g.entries(), space.q())));
                    }});

  run.check(suite, {"duality-norm-equality", "||J(y)||_q = ||y||_p", 1e-12, count,
                    [&](Rng& rng, std::size_t i) {
                      const auto space = space_for(rng, i);
                      const SipVector y(rng.complex_vector(static_cast<Eigen::Index>(space.dim())));
                      const double ny = lp_norm(y.entries(), space.p());
                      return std::abs(lp_norm(duality_map(space, y).entries(), space.q()) - ny) / ny;
                    }});

  run.check(suite, {"duality-round-trip", "J^{-1}(J(y)) = y", 1e-10, count,
                    [&](Rng& rng, std::size_t i) {
                      const auto space = space_for(rng, i);
                      const auto n = static_cast<Eigen::Index>(space.dim());
                      const SipVector y(rng.complex_vector(n));
                      const DualFunctional g(rng.complex_vector(n));
                      const Vector y2 = inverse_duality_map(space, duality_map(space, y)).entries();
                      const Vector g2 = duality_map(space, inverse_duality_map(space, g)).entries();
                      return std::max((y2 - y.entries()).norm() / y.entries().norm(),
                                      (g2 - g.entries()).norm() / g.entries().norm());
                    }});

  run.check(suite, {"p2-inner-product", "[x, y] = <x, y> for p = 2", 1e-14, cfg.trials,
                    [&](Rng& rng, std::size_t) {
                      const SipSpace space(pick(rng, 1, max_n), 2.0);
                      const auto n = static_cast<Eigen::Index>(space.dim());
                      const Vector x = rng.complex_vector(n);
                      const Vector y = rng.complex_vector(n);
                      const Scalar s = sip_eval(space, SipVector(x), SipVector(y));
                      return std::abs(s - y.dot(x)) / (x.norm() * y.norm());
                    }});

  run.check(suite, {"adjoint-composition", "T^* g^* = g^* T", 1e-12, count,
                    [&](Rng& rng, std::size_t i) {
                      const double p = cfg.p[i % cfg.p.size()];
                      const auto n0 = static_cast<Eigen::Index>(pick(rng, 1, max_n));
                      const auto n1 = static_cast<Eigen::Index>(pick(rng, 1, max_n));
                      const auto n2 = static_cast<Eigen::Index>(pick(rng, 1, max_n));
                      const Matrix t = rng.complex_matrix(n2, n1);
                      const Matrix s = rng.complex_matrix(n1, n0);
                      const DualFunctional g(rng.complex_vector(n2));
                      const Vector lhs = adjoint_apply(t * s, g).entries();
                      const Vector rhs = adjoint_apply(s, adjoint_apply(t, g)).entries();
                      const double comp = (lhs - rhs).norm() / (t.norm() * s.norm() * g.entries().norm());
                      // every g o T is bounded: |g(T f)| <= ||g||_q ||T||_{p->p} ||f||_p
                      const SipVector f(rng.complex_vector(n1));
                      const double value = std::abs(g(SipVector(t * f.entries())));
                      const double bound = lp_norm(g.entries(), conjugate_exponent(p)) *
                                           lp_operator_norm_bound(t, p) * lp_norm(f.entries(), p);
                      return std::max(comp, std::max(0.0, value - bound) / bound);
                    }});
}

// ---------------------------------------------------------------------------

void rkbs_core(Runner& run) {
  const auto& cfg = run.cfg();
  const std::string suite = "rkbs-core";
  const std::size_t max_n = cfg.features ? cfg.features : 3;
  const std::size_t max_m = std::max(cfg.points ? cfg.points : 6, max_n);
  const std::size_t count = cfg.trials * cfg.p.size();
  const auto model_for = [&](Rng& rng, std::size_t i) {
    const std::size_t n = pick(rng, 1, max_n);
    const std::size_t m = pick(rng, n, max_m);
    return fixtures::random_model(rng, m, n, cfg.p[i % cfg.p.size()]);
  };

  run.check(suite, {"rkbs-reproduction", "[f, K(., x)] = f(x)", 1e-10, count,
                    [&](Rng& rng, std::size_t i) {
                      const auto model = model_for(rng, i);
                      const Vector u = rng.complex_vector(static_cast<Eigen::Index>(model->features()));
                      const double nu = lp_norm(u, model->p());
                      double worst = 0.0;
                      for (std::size_t j = 0; j < model->size(); ++j) {
                        const double scale = (1.0 + nu) * (1.0 + lp_norm(model->dual_feature(j), model->q()));
                        worst = std::max(worst, rkbs_reproduce_check(*model, u, j) / scale);
                      }
                      return worst;
                    }});

  run.check(suite, {"duality-consistency", "J(w_x) = Psi(x)", 1e-12, count,
                    [&](Rng& rng, std::size_t i) {
                      const auto model = model_for(rng, i);
                      double worst = 0.0;
                      for (std::size_t j = 0; j < model->size(); ++j) {
                        const Vector back = duality_map(model->space(), SipVector(model->section(j))).entries();
                        const Vector psi = model->dual_feature(j);
                        worst = std::max(worst, (back - psi).norm() / psi.norm());
                      }
                      return worst;
                    }});

  run.check(suite, {"sharp-norm-optimizer", "||g||_# = sup |[f, g]| / ||f||", 1e-6, count,
                    [&](Rng& rng, std::size_t i) {
                      const auto model = model_for(rng, i);
                      const SharpFunction g(model, rng.complex_vector(static_cast<Eigen::Index>(model->size())));
                      const double closed = sharp_norm_closed(g);
                      const double opt = sharp_norm_opt(g, 100);
                      if (opt > closed + 1e-9) return kInf;
                      return std::abs(opt - closed) / closed;
                    }});

  run.check(suite, {"sharp-norm-euclidean", "||g||_# = ||v||_2 for p = 2", 1e-10, cfg.trials,
                    [&](Rng& rng, std::size_t) {
                      const std::size_t n = pick(rng, 1, max_n);
                      const auto model = fixtures::random_model(rng, pick(rng, n, max_m), n, 2.0);
                      const SharpFunction g(model, rng.complex_vector(static_cast<Eigen::Index>(model->size())));
                      const double euclid = g.dual().norm();
                      return std::max(std::abs(sharp_norm_closed(g) - euclid),
                                      std::abs(sharp_norm_opt(g, 100) - euclid)) / euclid;
                    }});

  run.check(suite, {"point-evaluation-bounds", "point evaluations are continuous on B and B#", 1e-10,
                    count, [&](Rng& rng, std::size_t i) {
                      const auto model = model_for(rng, i);
                      const std::size_t j = pick(rng, 0, model->size() - 1);
                      const auto rep = point_eval_bound_check(*model, j, 20, rng.next());
                      const auto norms = point_eval_norms(*model, j);
                      return std::max({rep.b_violation, rep.sharp_violation,
                                       std::abs(norms.on_b - norms.on_sharp) / norms.on_b});
                    }});

  run.check(suite, {"hilbert-degeneracy-p2", "p = 2 model is an RKHS with Gram Psi Psi^H", 1e-6,
                    cfg.trials, [&](Rng& rng, std::size_t) {
                      const std::size_t clusters = pick(rng, 1, 3);
                      const std::size_t ppc = pick(rng, 1, 3);
                      const std::size_t fpc = pick(rng, 1, ppc);
                      const auto cm = fixtures::clustered_model(rng, clusters, ppc, fpc, 2.0);
                      const auto f = fixtures::cluster_constant_function(rng, cm);
                      const Matrix k = cm.model->kernel_matrix();
                      const auto g = GramMatrix::custom(cm.model->points(), k);
                      const double banach = rkbs_mult_norm(*cm.model, f, Side::b, 50, rng.next()).value;
                      const double hilbert = multiplier_norm_eig(f, g).bound;
                      return std::abs(banach - hilbert) / (1.0 + hilbert);
                    }});
}

// ---------------------------------------------------------------------------

void banach_multipliers(Runner& run) {
  const auto& cfg = run.cfg();
  const std::string suite = "banach-multipliers";
  const std::size_t max_n = cfg.features ? cfg.features : 3;
  const std::size_t max_m = std::max(cfg.points ? cfg.points : 6, max_n);
  const auto& ps = cfg.p;

  run.check(suite, {"adjoint-chain", "[h, conj(f(y)) k1_y]_1 = f(y) h(y) = [M_f h, k2_y]_2", 1e-9,
                    cfg.trials * ps.size(), [&](Rng& rng, std::size_t i) {
                      const double p1 = ps[i % ps.size()];
                      const double p2 = ps[(i / ps.size() + i) % ps.size()];
                      RkbsModelPtr m1;
                      RkbsModelPtr m2;
                      std::optional<PointFunction> f;
                      switch (i % 3) {
                        case 0: {
                          const auto cm = fixtures::clustered_model(rng, pick(rng, 1, 3), pick(rng, 2, 3), 1, p1);
                          m1 = cm.model;
                          m2 = fixtures::reexponent(cm, p2).model;
                          f = fixtures::cluster_constant_function(rng, cm);
                          break;
                        }
                        case 1: {
                          const std::size_t n = pick(rng, 1, max_n);
                          const std::size_t m = pick(rng, n, max_m);
                          m1 = fixtures::random_model(rng, m, n, p1);
                          m2 = RkbsModel::create(m1->points(), fixtures::random_features(rng, m, m), p2);
                          f = fixtures::random_function(rng, m1->points());
                          break;
                        }
                        default: {
                          const std::size_t n = pick(rng, 1, max_n);
                          m1 = fixtures::random_model(rng, pick(rng, n, max_m), n, p1);
                          m2 = m1;
                          f = PointFunction::constant(m1->points(), rng.complex_normal());
                          break;
                        }
                      }
                      const Vector u = rng.complex_vector(static_cast<Eigen::Index>(m1->features()));
                      const std::size_t j = pick(rng, 0, m1->size() - 1);
                      return sip_adjoint_chain_check(*m1, *m2, *f, u, j).relative();
                    }});

  run.check(suite, {"adjoint-chain-p2-reduction", "p = 2 chain = Hilbert adjoint identity", 1e-9,
                    cfg.trials, [&](Rng& rng, std::size_t) {
                      const std::size_t m = pick(rng, 1, max_m);
                      const auto model = fixtures::random_model(rng, m, m, 2.0);
                      const auto f = fixtures::random_function(rng, model->points());
                      const Vector u = rng.complex_vector(static_cast<Eigen::Index>(m));
                      const std::size_t j = pick(rng, 0, m - 1);
                      const double chain = sip_adjoint_chain_check(*model, *model, f, u, j).relative();
                      const auto g = GramMatrix::custom(model->points(), model->kernel_matrix());
                      const double scale = (1.0 + f.sup_norm()) * linalg::spectral_norm(g.matrix());
                      return std::max(chain, adjoint_identity_check(f, g) / scale);
                    }});

  run.check(suite, {"representation-axioms-banach", "pi_B(f, g) = M_f(g) = f g", 1e-10,
                    cfg.trials * ps.size(), [&](Rng& rng, std::size_t i) {
                      const auto cm = fixtures::clustered_model(rng, pick(rng, 1, 3), pick(rng, 1, 3), 1,
                                                                ps[i % ps.size()]);
                      const auto f1 = fixtures::cluster_constant_function(rng, cm);
                      const auto f2 = fixtures::cluster_constant_function(rng, cm);
                      const auto n = static_cast<Eigen::Index>(cm.model->features());
                      const Vector u1 = rng.complex_vector(n);
                      const Vector u2 = rng.complex_vector(n);
                      const Scalar a = rng.complex_normal();
                      const Scalar b = rng.complex_normal();
                      return representation_check_banach(*cm.model, f1, f2, u1, u2, a, b).max();
                    }});

  run.check(suite, {"norm-consistency", "f_n -> 0 pointwise => ||f_n|| -> 0", 0.0, cfg.trials,
                    [&](Rng& rng, std::size_t i) {
                      static constexpr std::array<SequenceKind, 4> kinds = {
                          SequenceKind::geometric, SequenceKind::harmonic, SequenceKind::random_decay,
                          SequenceKind::constant};
                      SequenceSpec seq;
                      seq.kind = kinds[(i / 2) % kinds.size()];
                      seq.ratio = seq.kind == SequenceKind::random_decay ? 0.4 : 0.5;
                      seq.terms = 40;
                      seq.seed = rng.next();
                      ConsistencyInstance inst;
                      if (i % 2 == 0) {
                        const auto g = fixtures::well_conditioned_gram(rng, KernelSpec::gaussian(cfg.gamma),
                                                                       pick(rng, 2, max_m));
                        seq.base = rng.complex_vector(static_cast<Eigen::Index>(g.size()));
                        inst = RkhsBase::create(g);
                      } else {
                        const std::size_t n = pick(rng, 1, max_n);
                        const auto model = fixtures::random_model(rng, pick(rng, n, max_m), n, ps[i % ps.size()]);
                        seq.base = rng.complex_vector(static_cast<Eigen::Index>(n));
                        inst = model;
                      }
                      return norm_consistency_check(inst, seq).implication_holds() ? 0.0 : 1.0;
                    }});

  const double p0 = ps.front();
  run.probe(suite, "multiplier-iso-probe-square", "M_B = M_B#", cfg.trials, [&](std::uint64_t seed) {
    Rng rng(seed);
    const auto model = fixtures::random_model(rng, 4, 4, p0);
    const auto rep = multiplier_iso_probe(*model, cfg.trials, rng.next(), 30);
    return json{{"model", "square m=4 n=4"},
                {"p", p0},
                {"samples", rep.samples},
                {"member_b", rep.member_b},
                {"member_sharp", rep.member_sharp},
                {"agreement_rate", rep.agreement_rate()},
                {"both_members", rep.both_members},
                {"ratio_min", rep.ratio_min},
                {"ratio_max", rep.ratio_max},
                {"ratio_mean", rep.ratio_mean},
                {"histogram_edges", json(std::vector<double>(rep.histogram_edges.begin(), rep.histogram_edges.end() - 1))},
                {"histogram_counts", rep.histogram_counts}};
  });
  run.probe(suite, "multiplier-iso-probe-tall", "M_B = M_B#", cfg.trials, [&](std::uint64_t seed) {
    Rng rng(seed);
    const auto model = fixtures::random_model(rng, 6, 3, p0);
    const auto rep = multiplier_iso_probe(*model, cfg.trials, rng.next(), 30);
    return json{{"model", "tall m=6 n=3"},
                {"p", p0},
                {"samples", rep.samples},
                {"member_b", rep.member_b},
                {"member_sharp", rep.member_sharp},
                {"agreement_rate", rep.agreement_rate()},
                {"both_members", rep.both_members},
                {"ratio_mean", rep.both_members ? json(rep.ratio_mean) : json(nullptr)}};
  });
  run.probe(suite, "b0-probe", "B_0 = {g in B# : ||g||_# = 1} is a subspace of B", cfg.trials,
            [&](std::uint64_t seed) {
              Rng rng(seed);
              json out = json::array();
              const auto identity = fixtures::identity_model(4, p0);
              const auto tall = fixtures::random_model(rng, 6, 3, p0);
              for (const auto& [label, model] : {std::pair{"identity m=4", identity}, std::pair{"tall m=6 n=3", tall}}) {
                const auto rep = b0_probe(*model, cfg.trials, rng.next());
                json ce = json::array();
                for (const auto& c : rep.counterexamples)
                  ce.push_back(json{{"first", c.first}, {"second", c.second}, {"sum_norm", c.sum_norm}});
                out.push_back(json{{"model", label},
                                   {"samples", rep.samples},
                                   {"in_b", rep.in_b},
                                   {"membership_fraction", rep.membership_fraction()},
                                   {"pair_tests", rep.pair_tests},
                                   {"closure_failures", rep.closure_failures},
                                   {"counterexamples", ce}});
              }
              return json{{"p", p0}, {"models", out}};
            });
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& config) {
  validate(config);
  Runner run(config);
  const bool all = config.suite == "all";
  if (all || config.suite == "rkhs-core") rkhs_core(run);
  if (all || config.suite == "hilbert-multipliers") hilbert_multipliers(run);
  if (all || config.suite == "sip-core") sip_core(run);
  if (all || config.suite == "rkbs-core") rkbs_core(run);
  if (all || config.suite == "banach-multipliers") banach_multipliers(run);
  return run.take();
}

}  // namespace kml::suite
