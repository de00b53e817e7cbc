"""Tour of a small imaginary class group.

Builds Cl(-47), lists its reduced forms, composes a couple of them, shows
the invariant-factor decomposition and character table, and ends with the
JSON export the CLI would emit.

Run:  python3 demos/class_group_tour.py
"""

from isocayley import abelian, quadform

D = -47

cls = quadform.class_group(D)
print(f"discriminant {D}: fundamental={cls.discriminant.fundamental}, "
      f"conductor={cls.discriminant.conductor}")
print(f"class number h = {cls.order}, invariants {list(cls.group.invariants)}")
print()

print("reduced forms and their abstract coordinates:")
for cl in cls.classes:
    a, b, c = cl.triple()
    print(f"  ({a:2d},{b:3d},{c:2d})  ->  {cls.to_element[cl].coords}")
print()

# composition: square the first non-principal class and reduce
g = next(cl for cl in cls.classes if any(cls.to_element[cl].coords))
sq = abelian.op_mul(cls.element_of(g), cls.element_of(g))
print(f"square of {g.triple()} has coordinates {sq.coords}, "
      f"i.e. the class of {cls.class_of(sq).triple()}")
print()

sub = abelian.full_subgroup(cls.group)
print("character table (rows chi, columns the classes above, real parts):")
for chi in abelian.characters_of(sub):
    row = " ".join(f"{chi.value(cls.element_of(cl)).real:6.3f}"
                   for cl in cls.classes)
    print(f"  {row}")
print()

print("JSON export:")
print(cls.to_json_text())
