"""A tour of the exact inequality audit.

Every inequality in the catalogue is evaluated with rational arithmetic for
a range of s.  Entries are flagged as strict, tight, or expected to fail;
the audit reports only entries whose outcome differs from the flag.
"""

from matchlab.audit import audit_catalog, check_pivotal_bounds, mismatches, monotone_violations, reported_values

for mode in ("n0", "n0_minus_1"):
    recs = audit_catalog(range(3, 101), mode)
    print(f"mode {mode}: {len(recs)} records, {len(mismatches(recs))} unexpected, "
          f"{len(monotone_violations(recs))} margins that shrink with s")

recs = {(r.id, r.s): r for r in audit_catalog([3, 4, 5], "n0")}
for key in [("q2.g2-4.unfloored", 4), ("q3.floor", 3), ("q2.small-g2.s3.literal", 3),
            ("q2.small-g2.s3.exact", 3), ("q2.g2-3.unfloored", 5)]:
    r = recs[key]
    print(f"{r.id:26} s={r.s}: {r.lhs} vs {r.rhs}  margin {r.margin}  ({r.anchor[1]})")

print("\npivotal bounds hold for s <= 200:", check_pivotal_bounds(200, 3))
print("reported values reproduce:", all(r.as_expected for r in reported_values()))
