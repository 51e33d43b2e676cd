"""
What the translation produces
=============================

Print the witness and counters of small terms before and after
normalization, and the types they live at.
"""
from dialectica.equations import normalize
from dialectica.parsing import parse_source
from dialectica.printing import pretty
from dialectica.syntax import REAL, arrows
from dialectica.transform import counter, counter_type, witness, witness_type

for ty in (REAL, arrows(REAL, REAL), arrows(arrows(REAL, REAL), REAL)):
    print(f"{str(ty):24s} W = {witness_type(ty)}")
    print(f"{'':24s} C = {counter_type(ty)}")
print()

# closed term: only a witness
t = parse_source(r"\(x:real). mul x x")
print("term     ", pretty(t))
print("witness  ", pretty(witness(t)))
print("normal   ", pretty(normalize(witness(t))))
print()

# open term: one counter per free variable
t = parse_source("add (sq x) (mul x y)")
for v in ("x", "y"):
    print(f"C_{v}      ", pretty(normalize(counter(t, v))))
