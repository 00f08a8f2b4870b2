"""How the truncated Fock-space Fresnel matrices behave as dim and squeezing grow.

For each gamma t: agreement of the two constructions, intertwining defect,
the protected block (levels that keep their norm) and the unitarity
defect on it.

    python3 scripts/fock_truncation_study.py
"""
from fresnelck.abcd import ck_abcd
from fresnelck.fockspace import (
    dimensionless_abcd,
    fresnel_canonical,
    fresnel_normal_ordered,
    protected_block,
    relative_phase,
    verify_similarity,
)
from fresnelck.model import OscillatorSpec

spec = OscillatorSpec(gamma=0.5)
print(f"{'gamma t':>7} {'dim':>4} {'agree':>9} {'intertw':>9} {'block':>5} {'unitary':>9}")
for t in (0.5, 1.0, 2.0, 3.0):
    ab = dimensionless_abcd(ck_abcd(spec, t), spec)
    for dim in (32, 64, 128, 192):
        f3 = fresnel_normal_ordered(ab, dim)
        f5 = fresnel_canonical(ab, dim)
        agree = relative_phase(f3, f5)[1]
        defect = max(verify_similarity(f3, ab))
        k = protected_block(f3)
        unitary = f3.unitarity_defect(k) if k else float("nan")
        print(f"{spec.gamma * t:>7.2f} {dim:>4} {agree:>9.1e} {defect:>9.1e} {k:>5} {unitary:>9.1e}")
