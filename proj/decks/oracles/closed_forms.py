"""Closed-form and scalar-root expectations for the linear and MOSFET decks."""
import math

from mpmath import mp, mpf, findroot

mp.dps = 30

# rc_step.cir: v(t) = 1 - exp(-t/RC)
R, C = 1e3, 1e-6
print(f"rc_step V(out) at t=RC: {1 - math.exp(-1):.17g}")

# rc_lowpass.cir: H = 1/(1 + j w R C)
R, C = 1e3, 159.155e-9
fc = 1 / (2 * math.pi * R * C)
for f in (fc, 10 * fc, 1e3, 1e4):
    h = 1 / complex(1, 2 * math.pi * f * R * C)
    print(f"rc_lowpass f={f:.17g}: {20 * math.log10(abs(h)):.17g} dB, "
          f"{math.degrees(math.atan2(h.imag, h.real)):.17g} deg")

# rlc.cir: natural and damped frequencies
R, L, C = 1.0, 1e-3, 1e-6
f0 = 1 / (2 * math.pi * math.sqrt(L * C))
zeta = R / 2 * math.sqrt(C / L)
print(f"rlc f0 = {f0:.17g} Hz, zeta = {zeta:.17g}, fd = {f0 * math.sqrt(1 - zeta**2):.17g} Hz")
# step response of the capacitor voltage from rest
w0 = 2 * math.pi * f0
wd = w0 * math.sqrt(1 - zeta**2)
for t in (1e-4, 2.5e-4):
    v = 1 - math.exp(-zeta * w0 * t) * (math.cos(wd * t)
                                        + zeta / math.sqrt(1 - zeta**2) * math.sin(wd * t))
    print(f"rlc V(b) at t={t:g}: {v:.17g}")


def nmos_sat(vov, vds, beta, lam):
    return beta / 2 * vov**2 * (1 + lam * vds)


# cs_amp.cir: saturation, vds = VDD - RD*id
VDD, RD, VGS, VTO, BETA, LAM = mpf(5), mpf(1e4), mpf("1.5"), mpf(1), mpf("2e-3"), mpf("0.02")
vov = VGS - VTO
vds = findroot(lambda v: v - (VDD - RD * nmos_sat(vov, v, BETA, LAM)), 2.5)
gm = BETA * vov * (1 + LAM * vds)
gds = BETA / 2 * vov**2 * LAM
gain = gm / (1 / RD + gds)
print(f"cs_amp V(d) = {mp.nstr(vds, 17)}, |gain| = {mp.nstr(gain, 17)}"
      f" = {mp.nstr(20 * mp.log10(gain), 17)} dB")

# ltp.cir: symmetric inputs share the 200 uA tail equally
print(f"ltp V(d1) = V(d2) = {5 - 1e4 * 100e-6:.17g}")

# inv_wp*.cir: Vout = Vin = VM with both devices saturated
for ratio in ("0.5", "1", "2"):
    r = mpf(ratio)
    beta = mpf("1e-4")
    lam = mpf("0.05")
    vm = findroot(lambda v: nmos_sat(v - mpf("0.5"), v, beta, lam)
                  - nmos_sat(mpf(2) - v - mpf("0.5"), mpf(2) - v, r * beta, lam), 1)
    print(f"inverter Wp/Wn={ratio}: VM = {mp.nstr(vm, 17)}")
