"""cohsim: second-order coherence propagation and two-photon correlation imaging.

Simulates far-field diffraction-pattern imaging and broadband thin-lens
imaging with Gaussian-state light, for phase-insensitive (thermal),
phase-sensitive classical, biphoton-like quantum, and coherent sources.
"""

__version__ = "0.1.0"
