"""
Searching a small family
========================

"""

from planeram.ffsearch import SearchJob, run_search

job = SearchJob("perturbed", degrees=(2,), box=(-1, 0, 1))
rep = run_search(job)
for r in rep.records:
    print(r.map["f2"], [str(P) for P in r.verified_points], r.constraints["clean"])
print("discoveries:", len(rep.discoveries))
