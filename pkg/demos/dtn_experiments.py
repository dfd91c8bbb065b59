"""
Dirichlet-to-Neumann maps on the disk
=====================================

Radial conductivities have diagonal DtN matrices in the Fourier basis and
are solved mode by mode. General ones go through linear finite elements.
The Lipschitz ratio ||g1 - g2||_L2 / ||Lambda1 - Lambda2|| stays bounded
on a finite-dimensional class and blows up for fast localized oscillations.
"""
import numpy as np

from zernstab.dtn import (
    Conductivity2D,
    bounded_verdict,
    contrast_family,
    dtn_fem,
    dtn_spectral_radial,
    growth_verdict,
    lipschitz_ratio_experiment,
    operator_norm_h12,
    stable_family,
)

inclusion = Conductivity2D.two_phase(inner=3.0, outer=1.0, radius=0.5)
spec = dtn_spectral_radial(inclusion, 6)
fem = dtn_fem(inclusion, 6, mesh_h=0.03)
print("spectral:", np.round(spec.diagonal().real, 5))
print("FEM     :", np.round(fem.diagonal().real, 5))
print("H^1/2 -> H^-1/2 norm of the difference:", operator_norm_h12(fem - spec))

rows = lipschitz_ratio_experiment(stable_family(6, seed=1), N=12, mesh_h=0.05)
for r in rows:
    print(f"{r['name']:>9}: ratio {r['ratio']:.3f}  epsilon {r['epsilon']:.3f}  bound {r['stability_bound']:.3f}")
print(bounded_verdict(rows))

rows = lipschitz_ratio_experiment(contrast_family((2, 4, 8, 16)), N=16, mesh_h=0.04)
print(growth_verdict(rows))
