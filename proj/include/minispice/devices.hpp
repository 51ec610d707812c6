#pragma once

#include "minispice/netlist.hpp"

namespace minispice {

inline constexpr double kThermalVoltage = 0.025852;  // kT/q at 300 K
inline constexpr double kMaxExponent = 80.0;

struct DiodeParams {
  double is_sat = 1e-14;
  double n = 1.0;
  double vt_thermal = kThermalVoltage;

  double nvt() const { return n * vt_thermal; }
};

enum class Polarity { Nmos, Pmos };

struct MosfetParams {
  double vto = 0.0;
  double kp = 2e-5;
  double w = 1e-4;
  double l = 1e-4;
  double lambda = 0.0;
  Polarity polarity = Polarity::Nmos;

  double beta() const { return kp * w / l; }
};

DiodeParams diode_params(const ModelCard& card);
MosfetParams mosfet_params(const ModelCard& card);

struct DiodeEval {
  double i = 0.0;
  double g = 0.0;
};

// Shockley law. Past an exponent of kMaxExponent the curve continues along
// its tangent so wild Newton iterates cannot overflow.
DiodeEval diode_eval(const DiodeParams& p, double v);

// Critical voltage above which forward junction steps are compressed.
double diode_vcrit(const DiodeParams& p);

// pn-junction step limiting: forward steps above vcrit are pulled back onto a
// logarithmic path. Reverse steps and small steps pass unchanged.
double diode_limit(double v_new, double v_old, const DiodeParams& p);

enum class MosRegion { Cutoff, Triode, Saturation };

std::string_view to_string(MosRegion region);

struct MosfetEval {
  double id = 0.0;   // drain current, positive into the drain terminal
  double gm = 0.0;   // d id / d vgs
  double gds = 0.0;  // d id / d vds
  MosRegion region = MosRegion::Cutoff;
};

// Level-1 square law without body effect. Negative vds swaps drain and
// source; PMOS is evaluated by reflecting every voltage and the current.
MosfetEval mosfet_eval(const MosfetParams& p, double vgs, double vds);

// A device expanded about a bias point: i ≈ i_at_point + Σ g_k (v_k - v_k0).
struct LinearizedBranch {
  double i_at_point = 0.0;
  double g_small = 0.0;
  double i_equiv = 0.0;
};

LinearizedBranch linearize_diode(const DiodeParams& p, double v);

double waveform_eval(const SourceWaveform& w, double t);

}  // namespace minispice
