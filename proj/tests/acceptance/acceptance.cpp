#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "contlim/structured.hpp"
#include "contlim/gcmps.hpp"
#include "support/fixtures.hpp"

using namespace contlim;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(const char* id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    out.pass = false;
    out.detail += " [over time budget]";
  }
  if (!out.pass) ++failures;
  std::printf("%s %s %s (%.2fs) %s\n", out.pass ? "PASS" : "FAIL", id, title, secs, out.detail.c_str());
  std::fflush(stdout);
}

CMatrix ket_bra(Index dim, Index i, Index j) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

Outcome ac1() {
  const double gamma = 1.0;
  const MpsTensor t = presets::bracket(gamma, 1.0);
  const SuperOp e = transfer_matrix(t);
  const double p = 0.5 * (1.0 + std::exp(-2.0)), q = 0.5 * (1.0 - std::exp(-2.0));
  CMatrix ef = CMatrix::Zero(4, 4), eaf = CMatrix::Zero(4, 4);
  ef(0, 0) = ef(3, 3) = 1.0;
  eaf(0, 3) = eaf(3, 0) = 1.0;
  const double mix_err = (e.matrix - (p * ef + q * eaf)).norm();

  const std::vector<Complex> ev = sorted_eigenvalues(e.matrix);
  const double expected[4] = {1.0, std::exp(-2.0), 0.0, 0.0};
  double spec_err = 0.0;
  for (int i = 0; i < 4; ++i) spec_err = std::max(spec_err, std::abs(ev[static_cast<std::size_t>(i)] - expected[i]));

  const DivisibilityVerdict v = is_infinitely_divisible(e, 1.0);
  CMatrix pin = CMatrix::Zero(4, 4);
  pin(0, 0) = pin(3, 3) = 1.0;
  const bool divisible = v.status == DivisibilityStatus::divisible;
  const double p_err = divisible ? (v.projector->matrix - pin).norm() : 1.0;
  const bool plp = divisible && check_plp(*v.projector, *v.generator);
  const double recon = divisible ? (v.projector->matrix * channel_at(*v.generator, 1.0).matrix - e.matrix).norm() : 1.0;

  std::ostringstream os;
  os << "mix=" << sci(mix_err) << " spectrum=" << sci(spec_err) << " status=" << to_string(v.status) << " P_err=" << sci(p_err)
     << " plp=" << plp << " recon=" << sci(recon);
  return {mix_err <= 1e-12 && spec_err <= 1e-9 && divisible && p_err <= 1e-9 && plp && recon <= 1e-9, os.str()};
}

Outcome ac2() {
  const MpsTensor t = presets::ferromagnet(2, 1.0);
  const SuperOp e = transfer_matrix(t);
  const DivisibilityVerdict v = is_infinitely_divisible(e, 1.0);
  const bool divisible = v.status == DivisibilityStatus::divisible;
  double p_err = 1.0, on_range = 1.0, recon = 1.0;
  if (divisible) {
    p_err = (v.projector->matrix - e.matrix).norm();
    on_range = (v.generator->matrix * v.projector->matrix).norm();
    recon = (v.projector->matrix * channel_at(*v.generator, 1.0).matrix - e.matrix).norm();
  }
  const GeneralizedCmps g = from_mps(t);
  double jump_norm = 0.0, dens = 0.0;
  for (const auto& r : g.jumps) jump_norm += r.norm();
  for (Index a = 0; a < g.species(); ++a)
    for (double x : {0.1, 0.5, 0.9}) dens += density(g, 1.0, a, x);
  std::ostringstream os;
  os << "status=" << to_string(v.status) << " |P-E|=" << sci(p_err) << " |LP|=" << sci(on_range) << " recon=" << sci(recon)
     << " K=" << g.ancilla_dim << " jumps=" << g.species() << " |R|=" << sci(jump_norm) << " density=" << sci(dens);
  return {divisible && p_err <= 1e-12 && on_range <= 1e-12 && recon <= 1e-12 && g.ancilla_dim == 2 && jump_norm <= 1e-12 &&
              dens <= 1e-12,
          os.str()};
}

Outcome ac3() {
  const double s = M_SQRT1_2;
  const CMatrix r0 = s * ket_bra(2, 0, 1), r1 = s * ket_bra(2, 1, 0);
  const Lindblad gen{2, CMatrix::Zero(2, 2), {r0, r1}};
  const CMatrix id4 = CMatrix::Identity(4, 4);
  const CMatrix ladder = kron(r0, r0.conjugate()) + kron(r1, r1.conjugate());
  const CMatrix r01 = r0 * r1, r10 = r1 * r0;
  const CMatrix pairs = kron(r01, r01.conjugate()) + kron(r10, r10.conjugate());
  double err = 0.0;
  for (double l : {0.5, 2.0, 10.0}) {
    const CMatrix closed = std::exp(-l / 2) * (id4 + 2.0 * std::sinh(l / 2) * ladder + 4.0 * (std::cosh(l / 2) - 1.0) * pairs);
    err = std::max(err, (channel_at(gen, l).matrix - closed).norm());
  }
  const SuperOp p = kraus_to_superop(depolarizing_channel(CMatrix::Identity(2, 2) / 2.0));
  const double d40 = (channel_at(gen, 40.0).matrix - p.matrix).norm();
  const ThermoReport rep = verify_thermo_limit(p, thermo_liouvillian(canonical_form(p)), {10.0, 20.0, 30.0, 40.0}, 1e-8);
  std::ostringstream os;
  os << "closed_form=" << sci(err) << " d(40)=" << sci(d40) << " thermo_d(40)=" << sci(rep.distances.back());
  return {err <= 1e-9 && d40 <= 1e-8 && rep.converged, os.str()};
}

Outcome ac4() {
  const SuperOp e = transfer_matrix(presets::aklt(1.0));
  const DivisibilityVerdict v = is_infinitely_divisible(e, 1.0);
  const auto coarse = coarse_divisibility(e, 4);
  double err = 1.0;
  if (coarse) {
    const CMatrix pauli = to_pauli_basis({2, coarse->generator.matrix});
    CMatrix expected = CMatrix::Zero(4, 4);
    for (int i = 1; i < 4; ++i) expected(i, i) = std::log(1.0 / 9.0);
    err = (pauli - expected).norm();
  }
  std::ostringstream os;
  os << "status=" << to_string(v.status) << " coarse_p=" << (coarse ? coarse->power : 0) << " log_err=" << sci(err);
  return {v.status == DivisibilityStatus::not_divisible && coarse && coarse->power == 2 && err <= 1e-9, os.str()};
}

Outcome ac5() {
  Rng rng(20240501);
  int ok = 0, inconclusive = 0, bad = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const testing::DivisibleSample s = testing::random_divisible(rng, 4);
    const DivisibilityVerdict v = has_continuum_limit(s.tensor);
    if (v.status == DivisibilityStatus::inconclusive) {
      ++inconclusive;
      continue;
    }
    if (v.status != DivisibilityStatus::divisible && v.status != DivisibilityStatus::markovian) {
      ++bad;
      continue;
    }
    const GeneralizedCmps g = from_verdict(v);
    const double err = (transfer(g, s.tensor.spacing).matrix - transfer_matrix(s.tensor).matrix).norm();
    worst = std::max(worst, err);
    if (err <= 1e-6) {
      ++ok;
    } else {
      ++bad;
    }
  }
  std::ostringstream os;
  os << "reconstructed=" << ok << " inconclusive=" << inconclusive << " failed=" << bad << " worst=" << sci(worst);
  return {bad == 0 && inconclusive <= 5, os.str()};
}

Outcome ac6() {
  const double rate = 1.0, length = 2.0;
  const double closed = rate * std::tanh(rate * length);
  double previous = 1e300;
  bool monotone = true;
  double err200 = 1.0, cont_err = 0.0;
  std::ostringstream os;
  for (Index n : {50, 100, 200}) {
    const double a = length / static_cast<double>(n);
    const MpsTensor t = presets::bracket(rate * a, a);
    const GeneralizedCmps g = from_mps(t);
    double continuum = 0.0;
    for (Index s = 0; s < g.species(); ++s) continuum += density(g, length, s, 0.5 * length);
    cont_err = std::max(cont_err, std::abs(continuum - closed) / closed);
    const CMatrix num = presets::bracket_number_operator();
    const double discrete = discrete_two_point(t, n, num, n / 2, CMatrix::Identity(4, 4), n / 2).real() / a;
    const double rel = std::abs(discrete - continuum) / continuum;
    monotone = monotone && rel < previous;
    previous = rel;
    if (n == 200) err200 = rel;
    os << "N=" << n << ":" << sci(rel) << " ";
  }
  os << "continuum_vs_closed=" << sci(cont_err);
  return {err200 <= 0.02 && monotone && cont_err <= 1e-8, os.str()};
}

StructuredSpec reference_instance(bool case_a) {
  StructuredSpec s;
  s.n = 2;
  s.d1 = 1;
  s.m1 = 2;
  CMatrix sx(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  s.s = case_a ? sx : sz;
  s.t = CMatrix::Identity(1, 1);
  s.v = case_a ? sz : ket_bra(2, 0, 1);
  s.a = CMatrix::Zero(2, 2);
  s.b = CMatrix::Identity(1, 1);
  s.c = CMatrix::Zero(2, 2);
  s.sigmas = {CMatrix::Identity(2, 2) / 2.0, CMatrix::Identity(2, 2) / 2.0};
  return s;
}

Outcome ac7() {
  const StructuredSpec a = reference_instance(true), c = reference_instance(false);
  const ClassificationReport ra = classify(a), rc = classify(c);
  const bool va = verify_numeric(a), vc = verify_numeric(c);
  FuzzOptions mixed;
  mixed.maximally_mixed_sigma = true;
  const FuzzSummary f1 = fuzz_agreement(7, 200, kDefaultTol, mixed);
  const FuzzSummary f2 = fuzz_agreement(11, 200, kDefaultTol, {});
  std::ostringstream os;
  os << "instance(a)=" << to_string(ra.matched) << "/" << va << " instance(c)=" << to_string(rc.matched) << "/" << vc
     << " fuzz_mixed: true=" << f1.true_instances << "/" << f1.trials << " violations=" << f1.disagreements.size()
     << " fuzz_general: true=" << f2.true_instances << "/" << f2.trials << " violations=" << f2.disagreements.size();
  return {ra.matched == StructuredCase::a && rc.matched == StructuredCase::c && va && vc && f1.disagreements.empty() &&
              f2.disagreements.empty(),
          os.str()};
}

Outcome ac8() {
  std::ostringstream os;
  bool ok = true;
  auto note = [&](const std::string& name, double err, double bound) {
    if (!(err <= bound)) {
      ok = false;
      os << name << "=" << sci(err) << "! ";
    }
  };
  double cptp = 0.0, idem = 0.0, semigroup = 0.0, gauge = 0.0, additivity = 0.0;
  int fixtures = 0;

  std::vector<MpsTensor> tensors;
  for (const auto& name : presets::names()) tensors.push_back(presets::by_name(name, 1.0, 1.0));
  Rng rng(99);
  for (int i = 0; i < 10; ++i) tensors.push_back(testing::random_divisible(rng, 4).tensor);

  for (const auto& t : tensors) {
    ++fixtures;
    const SuperOp e = transfer_matrix(t);
    const KrausChannel k = superop_to_kraus(e);
    cptp = std::max(cptp, (kraus_to_superop(k).matrix - e.matrix).norm());
    cptp = std::max(cptp, (from_choi(choi(e)).matrix - e.matrix).norm());
    if (!is_cptp(e).ok()) cptp = 1.0;

    const DivisibilityVerdict v = has_continuum_limit(t);
    if (v.status != DivisibilityStatus::divisible && v.status != DivisibilityStatus::markovian) continue;
    const CMatrix& p = v.projector->matrix;
    idem = std::max(idem, (p * p - p).norm());
    semigroup = std::max(semigroup, (channel_at(*v.generator, 0.3).matrix * channel_at(*v.generator, 0.9).matrix -
                                     channel_at(*v.generator, 1.2).matrix)
                                        .norm());

    const GeneralizedCmps g = from_verdict(v);
    const double s1 = 0.4, s2 = 0.7;
    additivity = std::max(additivity, (transfer(g, s1).matrix * transfer(g, s2).matrix - transfer(g, s1 + s2).matrix).norm());

    GeneralizedCmps rotated = g;
    const CMatrix u = random_unitary(rng, g.ancilla_dim);
    for (Index i = 0; i < g.ancilla_dim; ++i) {
      CMatrix b = CMatrix::Zero(g.dim, g.dim);
      for (Index j = 0; j < g.ancilla_dim; ++j) b += u(j, i) * g.boundary[static_cast<std::size_t>(j)];
      rotated.boundary[static_cast<std::size_t>(i)] = b;
    }
    const double len = 1.3;
    gauge = std::max(gauge, std::abs(norm_squared(g, len) - norm_squared(rotated, len)));
    gauge = std::max(gauge, (transfer(g, len).matrix - transfer(rotated, len).matrix).norm());
    for (Index a = 0; a < g.species(); ++a) {
      gauge = std::max(gauge, std::abs(density(g, len, a, 0.6) - density(rotated, len, a, 0.6)));
      for (Index b = 0; b < g.species(); ++b)
        gauge = std::max(gauge, std::abs(correlation(g, len, a, b, 0.2, 0.9) - correlation(rotated, len, a, b, 0.2, 0.9)));
    }
  }
  note("cptp_roundtrip", cptp, 1e-10);
  note("idempotence", idem, 1e-9);
  note("semigroup", semigroup, 1e-9);
  note("segment_additivity", additivity, 1e-8);
  note("kraus_gauge", gauge, 1e-9);
  os << "fixtures=" << fixtures << " cptp=" << sci(cptp) << " idem=" << sci(idem) << " semigroup=" << sci(semigroup)
     << " additivity=" << sci(additivity) << " gauge=" << sci(gauge);
  return {ok, os.str()};
}

}  // namespace

int main() {
  run("AC1", "bracket example", 1.0, ac1);
  run("AC2", "ferromagnet", 1.0, ac2);
  run("AC3", "completely depolarising cMPS", 0.0, ac3);
  run("AC4", "AKLT coarse divisibility", 0.0, ac4);
  run("AC5", "random divisible reconstruction", 0.0, ac5);
  run("AC6", "continuum vs discrete bracket density", 30.0, ac6);
  run("AC7", "structured PL = PLP classifier", 60.0, ac7);
  run("AC8", "property suites", 0.0, ac8);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
