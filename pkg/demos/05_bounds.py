"""
The numerical side
==================

"""

from planeram import certify

# Hurwitz fails for every m >= 2
print([certify.hurwitz_contradiction(m, 3).holds for m in range(1, 6)])

for m in (2, 3, 4):
    print(m, certify.theorem1_cubic_multiplicity(m), certify.theorem1_ten_cubics(m))

# |E_s| for the branch curve of a degree-m map
for m in range(2, 8):
    print(m, certify.genus_bound(3 * m * m - 3 * m, m * m - 1).value)

for N in (3, 4, 10):
    print(N, certify.theorem2_bound(N), certify.prop4_bound(N))

rows = certify.remark2_sweep()
print(len(rows), "rows,", sum(r["status"] == "fails" for r in rows), "failures")
