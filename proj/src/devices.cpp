#include "minispice/devices.hpp"

#include <cmath>
#include <numbers>

namespace minispice {

namespace {

double param_or(const ModelCard& card, const char* key, double fallback) {
  auto it = card.params.find(key);
  return it == card.params.end() ? fallback : it->second;
}

}  // namespace

DiodeParams diode_params(const ModelCard& card) {
  DiodeParams p;
  p.is_sat = param_or(card, "IS", p.is_sat);
  p.n = param_or(card, "N", p.n);
  return p;
}

MosfetParams mosfet_params(const ModelCard& card) {
  MosfetParams p;
  p.polarity = card.kind == ModelKind::Pmos ? Polarity::Pmos : Polarity::Nmos;
  p.vto = param_or(card, "VTO", p.vto);
  p.kp = param_or(card, "KP", p.kp);
  p.w = param_or(card, "W", p.w);
  p.l = param_or(card, "L", p.l);
  p.lambda = param_or(card, "LAMBDA", p.lambda);
  return p;
}

DiodeEval diode_eval(const DiodeParams& p, double v) {
  const double nvt = p.nvt();
  const double x = v / nvt;
  if (x > kMaxExponent) {
    const double e = std::exp(kMaxExponent);
    return {p.is_sat * (e * (1.0 + (x - kMaxExponent)) - 1.0), p.is_sat / nvt * e};
  }
  return {p.is_sat * std::expm1(x), p.is_sat / nvt * std::exp(x)};
}

LinearizedBranch linearize_diode(const DiodeParams& p, double v) {
  const auto [i, g] = diode_eval(p, v);
  return {i, g, i - g * v};
}

double diode_vcrit(const DiodeParams& p) {
  const double nvt = p.nvt();
  return nvt * std::log(nvt / (std::numbers::sqrt2 * p.is_sat));
}

double diode_limit(double v_new, double v_old, const DiodeParams& p) {
  const double nvt = p.nvt();
  if (v_new <= v_old || v_new <= diode_vcrit(p) || v_new - v_old <= 2.0 * nvt) return v_new;
  if (v_old > 0.0) return v_old + nvt * std::log1p((v_new - v_old) / nvt);
  return nvt * std::log(v_new / nvt);
}

std::string_view to_string(MosRegion region) {
  switch (region) {
    case MosRegion::Cutoff: return "cutoff";
    case MosRegion::Triode: return "triode";
    case MosRegion::Saturation: return "saturation";
  }
  return "?";
}

namespace {

// NMOS with vds >= 0.
MosfetEval nmos_forward(const MosfetParams& p, double vgs, double vds) {
  const double vov = vgs - p.vto;
  if (vov <= 0.0) return {0.0, 0.0, 0.0, MosRegion::Cutoff};
  const double beta = p.beta();
  const double clm = 1.0 + p.lambda * vds;
  if (vds < vov) {
    const double core = vov * vds - 0.5 * vds * vds;
    return {beta * core * clm, beta * vds * clm,
            beta * (vov - vds) * clm + beta * core * p.lambda, MosRegion::Triode};
  }
  const double core = 0.5 * vov * vov;
  return {beta * core * clm, beta * vov * clm, beta * core * p.lambda, MosRegion::Saturation};
}

MosfetEval nmos_eval(const MosfetParams& p, double vgs, double vds) {
  if (vds >= 0.0) return nmos_forward(p, vgs, vds);
  // Roles of drain and source exchange: id(vgs, vds) = -f(vgs - vds, -vds).
  const MosfetEval r = nmos_forward(p, vgs - vds, -vds);
  return {-r.id, -r.gm, r.gm + r.gds, r.region};
}

}  // namespace

MosfetEval mosfet_eval(const MosfetParams& p, double vgs, double vds) {
  if (p.polarity == Polarity::Nmos) return nmos_eval(p, vgs, vds);
  MosfetParams mirrored = p;
  mirrored.vto = -p.vto;
  mirrored.polarity = Polarity::Nmos;
  const MosfetEval r = nmos_eval(mirrored, -vgs, -vds);
  return {-r.id, r.gm, r.gds, r.region};
}

double waveform_eval(const SourceWaveform& w, double t) {
  struct Visitor {
    double t;
    double operator()(const DcWave& d) const { return d.value; }
    double operator()(const SinWave& s) const {
      return s.offset + s.amplitude * std::sin(2.0 * std::numbers::pi * s.freq * t);
    }
    double operator()(const PulseWave& p) const {
      if (t < p.delay) return p.v1;
      double tp = t - p.delay;
      if (p.period > 0.0) tp = std::fmod(tp, p.period);
      if (tp < p.rise) return p.v1 + (p.v2 - p.v1) * tp / p.rise;
      tp -= p.rise;
      if (tp < p.width) return p.v2;
      tp -= p.width;
      if (tp < p.fall) return p.v2 + (p.v1 - p.v2) * tp / p.fall;
      return p.v1;
    }
  };
  return std::visit(Visitor{t}, w);
}

}  // namespace minispice
