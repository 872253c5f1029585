from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly, enumerate_monic_irreducibles
from equivcnf.algebra.rational import RationalFunction
from equivcnf.algebra.finite_algebra import FiniteAlgebra
from equivcnf.algebra.laurent import LaurentSeries, laurent_arith
from equivcnf.algebra.normal_forms import InvariantFactors, smith_invariants, hnf
