"""Physical constants (SI)."""

C_LIGHT = 299792458.0        # vacuum light speed, m/s
E_CHARGE = 1.602176634e-19   # electron charge, C
