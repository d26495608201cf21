"""Decision procedures for analogical proportions between finite algebras.

Submodules: ``algebra`` (algebras, maps, partitions), ``terms`` (unary
terms), ``proportions`` (proportion relations and their axioms),
``propstruct`` (p-homomorphisms, p-functors and friends), ``search``
(small-instance search and exhibits), ``specfile`` (text format) and
``cli``.
"""
from .algebra import FiniteAlgebra, Mapping, Partition, Signature
from .proportions import ProportionRelation
from .propstruct import PAlgebra
from .specfile import parse_spec
from .verdict import Qualifier, Verdict

__version__ = "0.1.0"

__all__ = ["FiniteAlgebra", "Mapping", "Partition", "Signature", "ProportionRelation",
           "PAlgebra", "parse_spec", "Qualifier", "Verdict"]
