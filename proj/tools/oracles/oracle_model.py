#!/usr/bin/env python3
"""Independent recomputation of model quantities frozen into the C++ tests.

Every parameter is restated here by hand (not parsed from the data files) so
a bug in the C++ config loader cannot silently agree with itself.  Run and
paste the printed constants into the tests when the model changes.
"""

import math

RPM_TO_RAD = math.pi / 30.0


# ---------------------------------------------------------------- default
DEFAULT = dict(
    mass=40000.0,
    rho=1.188,
    cd=0.56,
    af=10.0,
    g=9.81,
    crr=0.0055,
    rw=0.492,
    ir=2.64,
    etar=0.96,
    gears=[14.94, 11.73, 9.04, 7.09, 5.54, 4.35, 3.44, 2.70, 2.08, 1.63,
           1.27, 1.00],
    loss_c1=[0.0080, 0.0076, 0.0073, 0.0069, 0.0065, 0.0062, 0.0058, 0.0055,
             0.0051, 0.0047, 0.0044, 0.0040],
    loss_c2=[0.0300, 0.0282, 0.0264, 0.0245, 0.0227, 0.0209, 0.0191, 0.0173,
             0.0155, 0.0136, 0.0118, 0.0100],
    loss_c3=[12.0, 11.4, 10.7, 10.1, 9.5, 8.8, 8.2, 7.5, 6.9, 6.3, 5.6, 5.0],
    fuel=[0.05, 1.0e-4, 2.0e-5, 8.0e-8, 5.6e-6, 1.5e-7],
    friction=[(600, 110), (1000, 140), (1400, 180), (1800, 230), (2200, 285)],
    tmax=[(600, 1700), (800, 2200), (1000, 2500), (1400, 2500), (1700, 2200),
          (1900, 1900), (2100, 1500)],
    bmax=[(600, 300), (1000, 600), (1400, 900), (1800, 1200), (2100, 1400)],
    wmin=600.0,
    wmax=2100.0,
    q=42600.0,
)

TOY = dict(
    mass=40000.0,
    rho=1.188,
    cd=0.56,
    af=10.0,
    g=9.81,
    crr=0.0055,
    rw=0.5,
    ir=3.0,
    etar=0.96,
    gears=[3.0, 1.8, 1.0],
    loss_c1=[0.006, 0.005, 0.004],
    loss_c2=[0.02, 0.015, 0.01],
    loss_c3=[8.0, 6.0, 5.0],
    fuel=[0.06, 1.2e-4, 2.5e-5, 9.0e-8, 6.1e-6, 2.0e-7],
    friction=[(600, 100), (1400, 160), (2100, 220)],
    tmax=[(600, 1600), (1000, 2300), (1500, 2300), (2100, 1600)],
    bmax=[(600, 250), (1400, 800), (2100, 1250)],
    wmin=600.0,
    wmax=2100.0,
    q=42600.0,
)


def interp(table, x):
    xs = [a for a, _ in table]
    ys = [b for _, b in table]
    if x <= xs[0]:
        return ys[0]
    if x >= xs[-1]:
        return ys[-1]
    for i in range(len(xs) - 1):
        if xs[i] <= x <= xs[i + 1]:
            t = (x - xs[i]) / (xs[i + 1] - xs[i])
            return ys[i] + t * (ys[i + 1] - ys[i])
    raise AssertionError


def f_res(p, v, alpha):
    return (0.5 * p["rho"] * p["cd"] * p["af"] * v * v +
            p["mass"] * p["g"] * (p["crr"] * math.cos(alpha) +
                                  math.sin(alpha)))


def omega_rpm(p, gear, v):
    return p["gears"][gear - 1] * p["ir"] * v / p["rw"] / RPM_TO_RAD


def fuel_rate(p, torque, w):
    c4, c5, c6, c7, c8, c9 = p["fuel"]
    m = (c4 + c5 * w + c6 * torque + c7 * w * w + c8 * w * torque +
         c9 * torque * torque)
    return max(m, 0.0)


def loss(p, gear, torque, w):
    c1 = p["loss_c1"][gear - 1]
    c2 = p["loss_c2"][gear - 1]
    c3 = p["loss_c3"][gear - 1]
    return min(max(c1 * w + c2 * abs(torque) + c3, 0.0), abs(torque))


def eff(p, torque, w):
    """Engine chemical-to-shaft efficiency at a map point."""
    power = torque * w * RPM_TO_RAD
    m = fuel_rate(p, torque, w)
    if m <= 0 or power <= 0:
        return 0.0
    return power / (m * p["q"])


def best_torque(p, w):
    """Most efficient torque at speed w: minimize mdot/P over T."""
    c4, c5, c6, c7, c8, c9 = p["fuel"]
    a = c4 + c5 * w + c7 * w * w
    t = math.sqrt(a / c9)
    return min(max(t, 0.0), interp(p["tmax"], w))


def peak_map_eff(p, n=2001):
    best = 0.0
    for i in range(n):
        w = p["wmin"] + (p["wmax"] - p["wmin"]) * i / (n - 1)
        best = max(best, eff(p, best_torque(p, w), w))
    return best


def max_engine_power(p, n=2001):
    best = 0.0
    for i in range(n):
        w = p["wmin"] + (p["wmax"] - p["wmin"]) * i / (n - 1)
        best = max(best, interp(p["tmax"], w) * w * RPM_TO_RAD)
    return best


def cruise_torque(p, gear, v, alpha):
    fr = f_res(p, v, alpha)
    w = omega_rpm(p, gear, v)
    ratio = p["gears"][gear - 1] * p["ir"]
    c1 = p["loss_c1"][gear - 1]
    c2 = p["loss_c2"][gear - 1]
    c3 = p["loss_c3"][gear - 1]
    return (fr * p["rw"] / (p["etar"] * ratio) + c1 * w + c3) / (1.0 - c2)


def main():
    print("== default vehicle ==")
    d = DEFAULT
    print("f_res(22, 0.02)        =", repr(f_res(d, 22.0, 0.02)))
    print("omega(g12, 25)         =", repr(omega_rpm(d, 12, 25.0)))
    print("loss(g8, 1000, 1200)   =", repr(loss(d, 8, 1000.0, 1200.0)))
    print("fuel_rate(1200, 1300)  =", repr(fuel_rate(d, 1200.0, 1300.0)))
    print("best_torque(1300)      =", repr(best_torque(d, 1300.0)))
    print("max_engine_power       =", repr(max_engine_power(d)))
    print("peak_map_eff           =", repr(peak_map_eff(d)))
    print("cruise_torque(g12, 22, 0.0)  =",
          repr(cruise_torque(d, 12, 22.0, 0.0)))

    print("== toy vehicle ==")
    t = TOY
    print("f_res(20, 0.005)       =", repr(f_res(t, 20.0, 0.005)))
    print("omega(g3, 20)          =", repr(omega_rpm(t, 3, 20.0)))
    print("max_engine_power       =", repr(max_engine_power(t)))
    print("peak_map_eff           =", repr(peak_map_eff(t)))
    print("best_torque(1000)      =", repr(best_torque(t, 1000.0)))

    # Cruise stage cost: gear 3, v0 = v1 = 20, grade 0.005, ds 25, phi 10.
    v_bar = 20.0
    te = cruise_torque(t, 3, v_bar, 0.005)
    w = omega_rpm(t, 3, v_bar)
    mdot = fuel_rate(t, te, w)
    dt = 25.0 / v_bar
    fuel = mdot * dt
    wf, wt = 1.0 / 11.0, 10.0 / 11.0
    print("cruise g3 te           =", repr(te))
    print("cruise g3 omega        =", repr(w))
    print("cruise g3 fuel_g       =", repr(fuel))
    print("cruise g3 weighted     =", repr(wf * fuel + wt * dt))

    # Accelerate step from v0 = 18, gear 2, flat: slope from v0, then the
    # stage cost evaluated at the midpoint speed.
    v0 = 18.0
    w0 = omega_rpm(t, 2, v0)
    tb0 = best_torque(t, w0)
    ratio = t["gears"][1] * t["ir"]
    to_wheel = t["etar"] * ratio / t["rw"]
    j_eff = 0.0  # toy powertrain inertia is zero
    m_eff = t["mass"] + j_eff
    force0 = to_wheel * (tb0 - loss(t, 2, tb0, w0)) - f_res(t, v0, 0.0)
    dvds = force0 / (m_eff * v0)
    v1 = v0 + dvds * 25.0
    vb = 0.5 * (v0 + v1)
    wb = omega_rpm(t, 2, vb)
    tbb = best_torque(t, wb)
    mdotb = fuel_rate(t, tbb, wb)
    dtb = 25.0 / vb
    print("accel g2 dvds(18)      =", repr(dvds))
    print("accel g2 v1            =", repr(v1))
    print("accel g2 fuel_g        =", repr(mdotb * dtb))
    print("accel g2 weighted      =", repr(wf * mdotb * dtb + wt * dtb))

    # Downhill: grade -0.03, gear 2, v = 15; brake torque that holds speed.
    # (Gear 3 lacks the leverage: its required t_eb exceeds the brake table.)
    # The transmission efficiency acts on the transferred torque magnitude
    # (eta_t = 1 - T_loss/|T|), so the braking torque delivered to the road
    # is to_wheel*(t_req - loss(t_req)) with t_req = T_fr + T_eb > 0. Solve
    # to_wheel*(t_req - loss(t_req)) + fr = 0 by bisection, independent of
    # the planner's closed-form inversion.
    alpha = -0.03
    v = 15.0
    fr = f_res(t, v, alpha)
    assert fr < 0
    w = omega_rpm(t, 2, v)
    ratio = t["gears"][1] * t["ir"]
    c1 = t["loss_c1"][1]
    c2 = t["loss_c2"][1]
    c3 = t["loss_c3"][1]
    to_wheel = t["etar"] * ratio / t["rw"]

    def net(t_req):
        ls = min(max(c1 * w + c2 * t_req + c3, 0.0), t_req)
        return to_wheel * (t_req - ls) + fr

    lo_b, hi_b = 0.0, 5000.0
    assert net(lo_b) < 0 < net(hi_b)
    for _ in range(200):
        mid = 0.5 * (lo_b + hi_b)
        if net(mid) < 0:
            lo_b = mid
        else:
            hi_b = mid
    t_req = 0.5 * (lo_b + hi_b)
    t_fr = interp(t["friction"], w)
    t_eb = t_req - t_fr
    bmax = interp(t["bmax"], w)
    assert 0.0 <= t_eb <= bmax, (t_eb, bmax)
    # Gear 3 genuinely cannot hold this state: required t_eb above its cap.
    w3 = omega_rpm(t, 3, v)
    ratio3 = t["gears"][2] * t["ir"]
    to_wheel3 = t["etar"] * ratio3 / t["rw"]
    c13, c23, c33 = t["loss_c1"][2], t["loss_c2"][2], t["loss_c3"][2]
    t_req3 = (-fr * t["rw"] / (t["etar"] * ratio3) + c13 * w3 + c33) / (1 - c23)
    assert t_req3 - interp(t["friction"], w3) > interp(t["bmax"], w3)
    print("downhill g2 t_req      =", repr(t_req))
    print("downhill g2 t_eb       =", repr(t_eb))
    print("downhill g2 residual   =", repr(net(t_req)))


if __name__ == "__main__":
    main()
