"""Load the bundled cohort survey, check it, and look at a few cells.

The table has eight cohorts (four societies x two genders) and 28 attribute
prevalences in percent. "Inversion of Status" appears twice, once as an
intervening attribute and once as a resultant one, so the schema keeps both
under qualified names.
"""
import numpy as np

from culturality import cohort_vector, load_survey, validate

table = load_survey()
print(f"{len(table.cohorts)} cohorts x {len(table.schema)} attributes")
print("diagnostics:", validate(table) or "none")

for cat in ("modernization", "intervening", "resultant"):
    print(f"{cat:>14}: {len(table.schema.indices(cat))} attributes")

for name in ("Inversion of Status (intervening)", "Inversion of Status (resultant)"):
    row = [c.values[name] for c in table.cohorts]
    print(f"{name:<36}", row)

# cohort vectors live on [0, 1]
X = np.array([cohort_vector(table, *key) for key in table.keys])
print("cohort means:", np.round(X.mean(axis=1), 3))
print("stored aggregate row, kept verbatim:", dict(table.stored_aggregate))
