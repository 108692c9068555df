"""Reproduce the worked examples: each line prints the computed value next to the expected one."""

import math

import numpy as np

from bakryemery.model import ModelParams, mean_curvature_model
from bakryemery.space import builtin, mean_curvature_f, ric_f_radial, verify_bound, vol_f
from bakryemery.theorems import (check_mc_a, check_mc_b, check_myers, check_vol_b, excess_bound,
                                 hypersurface_distance_check)


def show(label, got, want):
    print(f"{label:58s} {got:>14.8g}   expected {want}")


def main():
    r = np.linspace(0.1, 5.0, 50)

    g = builtin("gaussian_soliton", lam=1.0, n=2)
    show("Gaussian soliton: Ric_f (min over r)", float(np.min(ric_f_radial(g, r))), "1")
    show("Gaussian soliton: total f-volume of the plane", vol_f(g, 0, 12.0), f"2 pi = {2 * math.pi:.8g}")
    g3 = builtin("gaussian_soliton", lam=1.0, n=3)
    show("Gaussian soliton: total f-volume of 3-space", vol_f(g3, 0, 12.0), f"{(2 * math.pi) ** 1.5:.8g}")

    hq = builtin("hyperbolic_quadratic", n=3)
    show("hyperbolic + 2r^2: Ric_f (min over r)", float(np.min(ric_f_radial(hq, r))), "2 = n - 1")
    show("hyperbolic + 2r^2: certificate slack vs H = 1", verify_bound(hq, 1.0, "ric_f").min_slack, "0")

    el = builtin("euclidean_linear", n=3)
    diff = mean_curvature_f(el, r, 1.0) - mean_curvature_model(ModelParams(3, 0.0), r)
    show("flat + x_1: m_f - m_H along c = 1", float(np.mean(diff)), "-1")
    rep = check_vol_b(el, 0.0, 1.0, falsify=True)
    show("flat + x_1: first radius where the bounded-f volume bound fails",
         rep.extras["first_violation_radius"], "finite")

    lf = builtin("euclidean_linear_f", a=0.7, n=3)
    rep = check_mc_a(lf, 0.0, 0.7)
    show("f = -0.7 r: max |m_f - m_H - a|", float(np.max(np.abs(rep.columns["lhs"] - 0.7))), "0")

    sp = builtin("sphere_perturbed", n=3, eps=0.5)
    show("perturbed sphere: min margin of the bounded-f mean curvature bound",
         check_mc_b(sp, 0.75, 0.5).min_margin, ">= 0")
    show("perturbed sphere: diameter bound margin", check_myers(sp, 0.75, 0.5).min_margin, "4.7823 - pi = 1.6407")

    show("Euclidean excess (n=3, d=4, h=1)", 2 * math.sqrt(5) - 4, "0.4721")
    show("excess bound (n=3, d=4, h=1)", excess_bound(3, 0.0, math.sqrt(5), math.sqrt(5), 1.0), "4.154")

    rs = builtin("constant_curvature", n=3, H=1.0)
    t = 0.3
    rep = hypersurface_distance_check(rs, 1.0, math.pi / 2 - t, math.pi / 2 + t)
    show("round sphere, levels pi/2 -+ 0.3: distance", rep.extras["distance"], "0.6")
    show("round sphere, levels pi/2 -+ 0.3: bound", rep.extras["bound"], f"2 tan(0.3) = {2 * math.tan(t):.8g}")


if __name__ == "__main__":
    main()
