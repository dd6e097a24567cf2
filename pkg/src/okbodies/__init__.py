"""Newton-Okounkov bodies of Grassmannians from plabic graphs.

The package computes, for the Grassmannian X = Gr(n-k, C^n):

* flow polynomials and Pluecker valuations attached to a reduced plabic
  graph (``plabic``, ``charts``),
* the superpotential polytopes Gamma of the mirror Grassmannian, via the
  matching expansion of the superpotential (``mirror``),
* exact rational polyhedral geometry for those bodies (``polyhedra``),
* a census of move-equivalence classes of plabic graphs together with the
  associated bodies (``census``).

Everything is exact: coefficients are integers, coordinates are
``fractions.Fraction``.  There are no runtime dependencies outside the
standard library.
"""

from .partitions import GridShape

__all__ = ["GridShape"]
__version__ = "0.1.0"
