"""Container for the two-site correlators and sublattice magnetizations.

One CorrelatorSet describes an equilibrium state, or one time slice of a
quench, of a nearest-neighbor even-odd spin pair: transverse correlators
C^xx, C^yy, the chirality-carrying cross terms C^xy, C^yx, the z-z
correlator, and the two sublattice z-magnetizations.  For uniform-field
states mz_e == mz_o.
"""

from __future__ import annotations

from dataclasses import dataclass


def wick_czz(mz_e: float, mz_o: float, cxx: float, cyy: float,
             cxy: float, cyx: float) -> float:
    """z-z correlator of a Gaussian fermionic state from the other moments."""
    return mz_e * mz_o - cxx * cyy + cxy * cyx


@dataclass(frozen=True)
class CorrelatorSet:
    cxx: float
    cyy: float
    cxy: float
    cyx: float
    czz: float
    mz_e: float
    mz_o: float
    degenerate_ground: bool = False

    @property
    def mz(self) -> float:
        """Mean z-magnetization; equals both sublattices when uniform."""
        return 0.5 * (self.mz_e + self.mz_o)

    def wick_residual(self) -> float:
        return self.czz - wick_czz(self.mz_e, self.mz_o, self.cxx, self.cyy,
                                   self.cxy, self.cyx)

    def as_dict(self) -> dict:
        return {
            "cxx": self.cxx, "cyy": self.cyy, "cxy": self.cxy, "cyx": self.cyx,
            "czz": self.czz, "mz_e": self.mz_e, "mz_o": self.mz_o,
        }


def from_moments(cxx, cyy, cxy, cyx, mz_e, mz_o, degenerate_ground=False) -> CorrelatorSet:
    """Build a set with C^zz filled in through the Wick identity."""
    return CorrelatorSet(
        cxx=float(cxx), cyy=float(cyy), cxy=float(cxy), cyx=float(cyx),
        czz=wick_czz(float(mz_e), float(mz_o), float(cxx), float(cyy),
                     float(cxy), float(cyx)),
        mz_e=float(mz_e), mz_o=float(mz_o),
        degenerate_ground=degenerate_ground,
    )
