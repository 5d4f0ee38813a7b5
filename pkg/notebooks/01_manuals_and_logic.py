# %% [markdown]
# Manuals, events and the logic they generate.
# Starts with the three-outcome recognition test, then the nine dichotomies.

# %%
from opstat.logic import build_logic, is_orthomodular_poset
from opstat.manual import (
    coarsen_pack,
    dichotomy_manual,
    is_event,
    local_complements,
    tru_manual,
    validate_manual,
)

tru = tru_manual()
for op in tru.operations:
    print(op)

# %%
# events live inside a single operation
print(is_event(tru, {"R_T", "U_T"}))
print(is_event(tru, {"T_T", "T_R"}))

e = is_event(tru, {"T_T"})
print(sorted(c.sorted() for c in local_complements(tru, e)))

# %%
# packing R and U into "not T" gives the T vs T' dichotomy for target probes
packed = coarsen_pack(tru, 0, {"R_T", "U_T"}, "T'_T")
print(packed.operations[0])

# %%
triangle = validate_manual([tru.operations[0]])
logic = build_logic(triangle)
print(len(logic), "elements")
for a, b in logic.hasse_edges():
    print(f"{logic.label(a):>22}  <  {logic.label(b)}")

# %%
nine = dichotomy_manual()
logic = build_logic(nine)
report = is_orthomodular_poset(logic)
print(len(logic), "elements,", len(logic.atoms()), "atoms, orthomodular:", report.ok)

# %%
# a loop of three triangles: the logic exists but orthogonal joins can fail
loop = validate_manual([["a", "c", "e"], ["b", "e", "g"], ["c", "d", "g"]])
report = is_orthomodular_poset(build_logic(loop))
print(report.law, report.witness)
