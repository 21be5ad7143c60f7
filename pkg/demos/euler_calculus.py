"""Euler characteristics of one-edge graphs of groups."""

from fractions import Fraction

from coarsegrp.gog import HNN, Amalgam, chi_amalgam, eulerchar_report, gogeuler_check, one_relator_chi

print("chi(F2) = chi(Z) + chi(Z) - chi(1) =", chi_amalgam(0, 0, 1))

for shape in (Amalgam(2, 2), Amalgam(2, 3), Amalgam(3, 3, 2), HNN(1), HNN(2)):
    chk = gogeuler_check(-1, shape)
    print(f"{shape}: chi(G) = {chk.chi_G}, sign of chi(G)/chi(H) = {chk.ratio_sign}")

print("one-relator values:")
for n, m in ((1, 3), (2, 1), (2, 2), (3, 1)):
    r = one_relator_chi(n, m)
    print(f"  n={n} m={m}: {r.chi}{'  (flagged)' if r.outside_regime else ''}")

for chi_G, chi_H in ((0, -1), (Fraction(-1, 2), -1), (0, 0)):
    rep = eulerchar_report(chi_G, chi_H)
    print(f"chi(G)={chi_G}, chi(H)={chi_H}: {rep.classification}")
