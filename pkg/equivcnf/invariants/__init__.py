from equivcnf.invariants.class_module import ClassModule, class_module, exponential_image
from equivcnf.invariants.units import UnitLattice, free_generator, unit_lattice
from equivcnf.invariants.regulator import EnlargedLattice, VolumeClass, R_of_psi, enlarge_lattice, regulator_class
from equivcnf.invariants.pipeline import InvariantOptions, compute_invariants
from equivcnf.invariants.theorems import mtII_check, mtIII_check, verify_cnf
