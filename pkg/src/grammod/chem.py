"""Chemical reading of vertex and edge labels.

Vertex labels are an element symbol with an optional charge suffix
(``"O-"``, ``"H+"``, ``"Fe2+"``). Edge labels ``- = # :`` are bond types.
Anything else is still a valid label, it just has no chemical meaning.
"""
from __future__ import annotations

import enum
import re
from typing import NamedTuple

ELEMENT_SYMBOLS = (
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne",
    "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr",
    "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn",
    "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb",
    "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg",
    "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th",
    "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm",
    "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds",
    "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
)
ATOM_NUMBER = {sym: i + 1 for i, sym in enumerate(ELEMENT_SYMBOLS)}
INVALID_ATOM = 0

# Default valences for unbracketed SMILES atoms, lowest first.
VALENCES = {
    "B": (3,), "C": (4,), "N": (3, 5), "O": (2,), "P": (3, 5),
    "S": (2, 4, 6), "F": (1,), "Cl": (1,), "Br": (1,), "I": (1,),
}
ORGANIC_SUBSET = frozenset(VALENCES)

_LABEL_RE = re.compile(r"^([A-Z][a-z]?)(?:([1-9]?)([+-]))?$")


class BondType(enum.Enum):
    Single = "-"
    Double = "="
    Triple = "#"
    Aromatic = ":"
    Invalid = None


BOND_ORDER = {BondType.Single: 1, BondType.Double: 2, BondType.Triple: 3, BondType.Aromatic: 1.5}


class AtomData(NamedTuple):
    atom_id: int
    charge: int

    @property
    def is_valid(self) -> bool:
        return self.atom_id != INVALID_ATOM

    @property
    def symbol(self) -> str | None:
        return ELEMENT_SYMBOLS[self.atom_id - 1] if self.atom_id else None


def atom_data_of(label: str) -> AtomData:
    """Parse a vertex label into (atom number, charge); Invalid is atom 0."""
    m = _LABEL_RE.match(label)
    if m is None or m.group(1) not in ATOM_NUMBER:
        return AtomData(INVALID_ATOM, 0)
    charge = 0
    if m.group(3):
        charge = int(m.group(2) or 1)
        if m.group(3) == "-":
            charge = -charge
    return AtomData(ATOM_NUMBER[m.group(1)], charge)


def bond_type_of(label: str) -> BondType:
    for bt in (BondType.Single, BondType.Double, BondType.Triple, BondType.Aromatic):
        if label == bt.value:
            return bt
    return BondType.Invalid


def charge_suffix(charge: int) -> str:
    if charge == 0:
        return ""
    sign = "+" if charge > 0 else "-"
    mag = abs(charge)
    return sign if mag == 1 else f"{mag}{sign}"


def atom_label(symbol: str, charge: int = 0) -> str:
    return symbol + charge_suffix(charge)


def implicit_hydrogen_count(element: str, bond_order_sum: float, aromatic: bool = False) -> int:
    """Implicit H count from the default valence table.

    For non-aromatic atoms ``bond_order_sum`` may contain 1.5 per aromatic
    bond and is floored. Aromatic atoms pass their sum with aromatic bonds
    counted as 1; one further valence unit then goes to the pi system.
    Elements outside the organic subset get no implicit hydrogens.
    """
    valences = VALENCES.get(element)
    if valences is None:
        return 0
    total = int(bond_order_sum)
    target = next((v for v in valences if v >= total), None)
    if target is None:
        return 0
    return max(0, target - total - (1 if aromatic else 0))
