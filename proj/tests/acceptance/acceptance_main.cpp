// Acceptance criteria 1-12. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "kml/multipliers.hpp"
#include "kml/rkbs.hpp"
#include "kml/rkhs.hpp"
#include "kml/sip.hpp"
#include "kml/suite/fixtures.hpp"

using namespace kml;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  if (!out.pass) ++failures;
  std::printf("%s criterion %2d: %s (%s)\n", out.pass ? "PASS" : "FAIL", id, title.c_str(),
              out.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const std::array<const char*, 4> kFamilies = {"gaussian", "laplacian", "polynomial", "brownian-min"};
constexpr double kHilbertMinRatio = 1e-4;

GramMatrix hilbert_gram(Rng& rng, std::size_t index, std::size_t max_m) {
  // polynomial(2, 1) in two variables has rank 6; larger sets are singular
  const auto spec = fixtures::kernel_named(kFamilies[index % 4]);
  const std::size_t cap = index % 4 == 2 ? std::min<std::size_t>(max_m, 6) : max_m;
  return fixtures::well_conditioned_gram(rng, spec, pick(rng, 2, cap), kHilbertMinRatio);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void strip_wall(nlohmann::json& j) {
  if (j.is_object()) {
    j.erase("wall_ms");
    for (auto& [k, v] : j.items()) strip_wall(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_wall(v);
  }
}

}  // namespace

int main() {
  criterion(1, "reproducing property, 500 instances, m <= 25", [] {
    const auto t0 = Clock::now();
    double worst = 0.0;
    const std::size_t n = 500;
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng(derive_seed(1, stream_id("acceptance/1"), i));
      const auto spec = fixtures::kernel_named(kFamilies[i % 4]);
      const auto base = RkhsBase::create(spec, fixtures::random_points(rng, spec, pick(rng, 1, 25)));
      const SpanFunction f(base, rng.complex_vector(static_cast<Eigen::Index>(base->size())));
      for (const auto& y : base->points())
        worst = std::max(worst, std::abs(inner(f, SpanFunction::section(base, *base->points().index_of(y))) -
                                         evaluate(f, y)) /
                                    (1.0 + norm(f)));
    }
    const double secs = seconds_since(t0);
    return Outcome{worst <= 1e-9 && secs <= 10.0, fmt("max scaled residual %.3g, %.2f s", worst, secs)};
  });

  criterion(2, "evaluation functional norm equals sqrt K(y,y)", [] {
    double worst = 0.0;
    for (std::size_t i = 0; i < 200; ++i) {
      Rng rng(derive_seed(1, stream_id("acceptance/2"), i));
      const auto spec = fixtures::kernel_named(kFamilies[i % 4]);
      const auto base = RkhsBase::create(spec, fixtures::random_points(rng, spec, pick(rng, 1, 25)));
      for (std::size_t a = 0; a < base->size(); ++a) {
        const auto& y = base->points()[a];
        const double want = std::sqrt(eval_kernel(spec, y, y).real());
        worst = std::max({worst, std::abs(eval_functional_norm(spec, y) - want),
                          std::abs(norm(SpanFunction::section(base, a)) - want)});
      }
    }
    return Outcome{worst <= 1e-12, fmt("max deviation %.3g over 200 fixtures", worst)};
  });

  criterion(3, "Hilbert adjoint identity, 200 instances, m <= 10", [] {
    double worst = 0.0;
    for (std::size_t i = 0; i < 200; ++i) {
      Rng rng(derive_seed(1, stream_id("acceptance/3"), i));
      const auto g = hilbert_gram(rng, i, 10);
      const auto f = fixtures::random_function(rng, g.points());
      const double scale = (1.0 + f.sup_norm()) * linalg::spectral_norm(g.matrix());
      worst = std::max(worst, adjoint_identity_check(f, g) / scale);
    }
    return Outcome{worst <= 1e-9, fmt("max scaled residual %.3g", worst)};
  });

  criterion(4, "multiplier norm oracles agree, 200 instances, m <= 12; constants exact", [] {
    double worst = 0.0, worst_const = 0.0;
    for (std::size_t i = 0; i < 200; ++i) {
      Rng rng(derive_seed(1, stream_id("acceptance/4"), i));
      const auto g = hilbert_gram(rng, i, 12);
      const auto f = fixtures::random_function(rng, g.points());
      const double eig = multiplier_norm_eig(f, g).bound;
      const double bis = multiplier_norm_bisect(f, g, 1e-10).bound;
      worst = std::max(worst, std::abs(eig - bis) / (1.0 + eig));
      const Scalar c = rng.complex_normal() + Scalar(0.1, 0.0);
      const double b = multiplier_norm_eig(PointFunction::constant(g.points(), c), g).bound;
      worst_const = std::max(worst_const, std::abs(b - std::abs(c)) / std::abs(c));
    }
    return Outcome{worst <= 1e-6 && worst_const <= 1e-12,
                   fmt("max gap %.3g, constant deviation %.3g", worst, worst_const)};
  });

  criterion(5, "s.i.p. axioms, 1000 triples per p; p = 2 inner product", [] {
    double worst = 0.0, worst_ip = 0.0;
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
      for (std::size_t n = 1; n <= 8; ++n)
        worst = std::max(worst, sip_axioms_check(SipSpace(n, p), 125, derive_seed(5, stream_id("acceptance/5"), n)).max());
    }
    Rng rng(5);
    for (int t = 0; t < 1000; ++t) {
      const auto n = static_cast<Eigen::Index>(pick(rng, 1, 8));
      const Vector x = rng.complex_vector(n), y = rng.complex_vector(n);
      const Scalar s = sip_eval(SipSpace(static_cast<std::size_t>(n), 2.0), SipVector(x), SipVector(y));
      worst_ip = std::max(worst_ip, std::abs(s - y.dot(x)) / (x.norm() * y.norm()));
    }
    return Outcome{worst <= 1e-9 && worst_ip <= 1e-14, fmt("axioms %.3g, p=2 deviation %.3g", worst, worst_ip)};
  });

  criterion(6, "Riesz representation and duality maps, 100 trials per p", [] {
    double trip = 0.0, norms = 0.0, riesz = 0.0;
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
      const SipSpace space(6, p);
      for (std::size_t t = 0; t < 100; ++t) {
        Rng rng(derive_seed(6, stream_id("acceptance/6"), t) ^ static_cast<std::uint64_t>(p * 8));
        const Vector y = rng.complex_vector(6);
        const Vector g = rng.complex_vector(6);
        const double ny = lp_norm(y, p);
        trip = std::max(trip, (inverse_duality_map(space, duality_map(space, SipVector(y))).entries() - y).norm() / y.norm());
        trip = std::max(trip, (duality_map(space, inverse_duality_map(space, DualFunctional(g))).entries() - g).norm() / g.norm());
        norms = std::max(norms, std::abs(lp_norm(duality_map(space, SipVector(y)).entries(), space.q()) - ny) / ny);
        const auto rep = riesz_check(space, DualFunctional(g), 1, rng.next());
        riesz = std::max({riesz, rep.max_pairing_residual, rep.norm_residual / (1.0 + lp_norm(g, space.q()))});
      }
    }
    return Outcome{trip <= 1e-10 && norms <= 1e-12 && riesz <= 1e-9,
                   fmt("round trip %.3g, norm equality %.3g, pairing %.3g", trip, norms, riesz)};
  });

  criterion(7, "RKBS reproduction, 300 instances, p in {1.5, 2, 3}", [] {
    double worst = 0.0;
    for (std::size_t i = 0; i < 300; ++i) {
      Rng rng(derive_seed(7, stream_id("acceptance/7"), i));
      const double p = std::array{1.5, 2.0, 3.0}[i % 3];
      const std::size_t n = pick(rng, 1, 4);
      const auto model = fixtures::random_model(rng, pick(rng, n, 8), n, p);
      const Vector u = rng.complex_vector(static_cast<Eigen::Index>(n));
      const std::size_t j = pick(rng, 0, model->size() - 1);
      const double scale = (1.0 + lp_norm(u, p)) * (1.0 + lp_norm(model->dual_feature(j), model->q()));
      worst = std::max(worst, rkbs_reproduce_check(*model, u, j) / scale);
    }
    return Outcome{worst <= 1e-10, fmt("max scaled residual %.3g", worst)};
  });

  criterion(8, "sharp norm optimizer, 50 instances, budget 100; p = 2 Euclidean", [] {
    double worst = 0.0, euclid = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
      Rng rng(derive_seed(8, stream_id("acceptance/8"), i));
      const double p = std::array{1.5, 3.0, 4.0, 1.25, 6.0}[i % 5];
      const std::size_t n = pick(rng, 1, 5);
      const auto model = fixtures::random_model(rng, pick(rng, n, 8), n, p);
      const SharpFunction g(model, rng.complex_vector(static_cast<Eigen::Index>(model->size())));
      const double closed = sharp_norm_closed(g);
      worst = std::max(worst, std::abs(sharp_norm_opt(g, 100, false, rng.next()) - closed) / closed);

      const auto m2 = fixtures::random_model(rng, pick(rng, n, 8), n, 2.0);
      const SharpFunction g2(m2, rng.complex_vector(static_cast<Eigen::Index>(m2->size())));
      const double e = g2.dual().norm();
      euclid = std::max({euclid, std::abs(sharp_norm_closed(g2) - e) / e, std::abs(sharp_norm_opt(g2, 100) - e) / e});
    }
    return Outcome{worst <= 1e-6 && euclid <= 1e-10, fmt("max gap %.3g (cold start), p=2 deviation %.3g", worst, euclid)};
  });

  criterion(9, "multiplier adjoint chain, 120 instances; p = 2 reduction", [] {
    double worst = 0.0, reduction = 0.0;
    for (std::size_t i = 0; i < 120; ++i) {
      Rng rng(derive_seed(9, stream_id("acceptance/9"), i));
      const double p1 = std::array{1.5, 2.0, 3.0, 4.0}[i % 4];
      const double p2 = std::array{1.5, 2.0, 3.0, 4.0}[(i / 4) % 4];
      RkbsModelPtr m1, m2;
      std::optional<PointFunction> f;
      if (i % 3 == 0) {
        const auto cm = fixtures::clustered_model(rng, pick(rng, 1, 3), pick(rng, 2, 3), 1, p1);
        m1 = cm.model;
        m2 = fixtures::reexponent(cm, p2).model;
        f = fixtures::cluster_constant_function(rng, cm);
      } else if (i % 3 == 1) {
        const std::size_t n = pick(rng, 1, 3), m = pick(rng, n, 6);
        m1 = fixtures::random_model(rng, m, n, p1);
        m2 = RkbsModel::create(m1->points(), fixtures::random_features(rng, m, m), p2);
        f = fixtures::random_function(rng, m1->points());
      } else {
        const std::size_t n = pick(rng, 1, 3);
        m1 = m2 = fixtures::random_model(rng, pick(rng, n, 6), n, p1);
        f = PointFunction::constant(m1->points(), rng.complex_normal());
      }
      const Vector u = rng.complex_vector(static_cast<Eigen::Index>(m1->features()));
      worst = std::max(worst, sip_adjoint_chain_check(*m1, *m2, *f, u, pick(rng, 0, m1->size() - 1)).relative());

      // p = 2 square model: the chain and the Hilbert adjoint identity on its Gram agree
      const std::size_t m = pick(rng, 1, 6);
      const auto sq = fixtures::random_model(rng, m, m, 2.0);
      const auto h = fixtures::random_function(rng, sq->points());
      const auto g = GramMatrix::custom(sq->points(), sq->kernel_matrix());
      const double chain = sip_adjoint_chain_check(*sq, *sq, h, rng.complex_vector(static_cast<Eigen::Index>(m)),
                                                   pick(rng, 0, m - 1)).relative();
      const double hilbert = adjoint_identity_check(h, g) / ((1.0 + h.sup_norm()) * linalg::spectral_norm(g.matrix()));
      reduction = std::max({reduction, chain, hilbert});
    }
    return Outcome{worst <= 1e-9 && reduction <= 1e-9, fmt("max chain residual %.3g, p=2 reduction %.3g", worst, reduction)};
  });

  criterion(10, "representation axioms, 60 instances each for pi_H and pi_B", [] {
    double hil = 0.0, ban = 0.0;
    for (std::size_t i = 0; i < 60; ++i) {
      Rng rng(derive_seed(10, stream_id("acceptance/10"), i));
      const auto g = hilbert_gram(rng, i, 10);
      const auto base = RkhsBase::create(g);
      const auto m = static_cast<Eigen::Index>(g.size());
      hil = std::max(hil, representation_check_hilbert(fixtures::random_function(rng, g.points()),
                                                       fixtures::random_function(rng, g.points()),
                                                       SpanFunction(base, rng.complex_vector(m)),
                                                       SpanFunction(base, rng.complex_vector(m)),
                                                       rng.complex_normal(), rng.complex_normal()).max());
      const auto cm = fixtures::clustered_model(rng, pick(rng, 1, 3), pick(rng, 1, 3), 1,
                                                std::array{1.5, 2.0, 3.0, 4.0}[i % 4]);
      const auto n = static_cast<Eigen::Index>(cm.model->features());
      ban = std::max(ban, representation_check_banach(*cm.model, fixtures::cluster_constant_function(rng, cm),
                                                      fixtures::cluster_constant_function(rng, cm),
                                                      rng.complex_vector(n), rng.complex_vector(n),
                                                      rng.complex_normal(), rng.complex_normal()).max());
    }
    return Outcome{hil <= 1e-9 && ban <= 1e-9, fmt("pi_H %.3g, pi_B %.3g", hil, ban)};
  });

  criterion(11, "probes complete: iso agreement, B0 counterexample, norm consistency", [] {
    std::size_t agree = 0, total = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      Rng rng(derive_seed(11, stream_id("acceptance/11/iso"), i));
      const std::size_t m = pick(rng, 1, 4);
      const auto model = fixtures::random_model(rng, m, m, std::array{1.5, 2.0, 3.0, 4.0}[i % 4]);
      const auto rep = multiplier_iso_probe(*model, 25, rng.next(), 30);
      agree += rep.agreements;
      total += rep.samples;
    }
    const auto b0 = b0_probe(*fixtures::identity_model(4, 3.0), 20, 11);
    std::size_t sequences = 0, held = 0;
    for (std::size_t i = 0; i < 80; ++i) {
      Rng rng(derive_seed(11, stream_id("acceptance/11/nc"), i));
      SequenceSpec seq;
      seq.kind = std::array{SequenceKind::harmonic, SequenceKind::geometric, SequenceKind::random_decay,
                            SequenceKind::constant}[i % 4];
      seq.ratio = 0.5;
      seq.terms = 40;
      seq.seed = rng.next();
      ConsistencyInstance inst;
      if (i % 2 == 0) {
        const auto g = fixtures::well_conditioned_gram(rng, KernelSpec::gaussian(1.0), pick(rng, 2, 6));
        seq.base = rng.complex_vector(static_cast<Eigen::Index>(g.size()));
        inst = RkhsBase::create(g);
      } else {
        const std::size_t n = pick(rng, 1, 3);
        seq.base = rng.complex_vector(static_cast<Eigen::Index>(n));
        inst = fixtures::random_model(rng, pick(rng, n, 6), n, std::array{1.5, 3.0}[(i / 2) % 2]);
      }
      ++sequences;
      held += norm_consistency_check(inst, seq).implication_holds() ? 1 : 0;
    }
    const bool pass = agree == total && !b0.counterexamples.empty() && held == sequences;
    std::ostringstream d;
    d << "iso agreement " << agree << "/" << total << ", B0 counterexamples " << b0.closure_failures
      << ", implication " << held << "/" << sequences;
    return Outcome{pass, d.str()};
  });

  criterion(12, "CLI determinism: two runs of --suite all --seed 7 --trials 20", [] {
#ifndef KML_CLI_PATH
    return Outcome{false, "kml binary not built"};
#else
    const std::string dir = std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp";
    const std::string a = dir + "/kml_acceptance_a.json", b = dir + "/kml_acceptance_b.json";
    const std::string base = std::string("\"") + KML_CLI_PATH + "\" run --suite all --seed 7 --trials 20 --format json > ";
    const auto t0 = Clock::now();
    const int ra = std::system((base + '"' + a + "\" 2>/dev/null").c_str());
    const int rb = std::system((base + '"' + b + "\" 2>/dev/null").c_str());
    const double secs = seconds_since(t0);
    auto ja = nlohmann::json::parse(slurp(a));
    auto jb = nlohmann::json::parse(slurp(b));
    strip_wall(ja);
    strip_wall(jb);
    std::remove(a.c_str());
    std::remove(b.c_str());
    const bool same = ja == jb;
    const bool exit_ok = ra == 0 && rb == 0;
    std::ostringstream d;
    d << (same ? "identical" : "DIFFERENT") << " reports, exit codes " << ra << "/" << rb << ", "
      << fmt("%.2f s for both runs", secs);
    return Outcome{same && exit_ok && secs <= 60.0, d.str()};
#endif
  });

  std::printf("%s: %d of 12 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
