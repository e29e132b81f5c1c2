# Where do complex characteristic speeds come from?
import numpy as np

from swemed import spectral
from swemed.sediment import PVC
from swemed.system import MomentSystem

s = MomentSystem(2, PVC)
# shallow, fast and sheared: one of the states the random sweep flags.
# Here the full matrix happens to be real and the regularized one is not.
W = s.conserved(0.0236, -4.47, [1.039, -0.465], 0.13, 0.0)

for kind in ("full", "regularized"):
    vals = spectral.spectrum(s.transport_matrix(W, kind))
    print(f"{kind:12s}", np.round(vals, 4), " imag ratio", spectral.imag_ratio(vals))

# the regularized fluid block only sees alpha_1, and its characteristic
# polynomial splits into (u - lam) * cubic * moment block
f = spectral.factorization(s, W)
lam = 0.3
print("det(A - lam I) =", spectral.char_poly_direct(s.transport_matrix(W, "regularized"), lam))
print("factored       =", f(lam))

# with alpha_2 switched off the bed row is evaluated at the same state the
# fluid block is linearized around, and the spectrum is real again
W0 = W.copy()
W0[3] = 0.0
print("alpha_2 = 0   ", np.round(spectral.spectrum(s.transport_matrix(W0, "regularized")), 4))

# a map over (alpha_1, alpha_2) of the full matrix
a1, a2, ratio = spectral.hyperbolicity_map(s, "full", n=21)
print("full matrix: complex at", int((ratio > spectral.IMAG_TOL).sum()), "of", ratio.size, "grid points")
