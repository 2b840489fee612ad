"""Compare the sparse generalized inverses on one generated instance.

A 40 x 20 rank-10 matrix is generated, then each method is run and the
sparsity and norms of the resulting H are printed side by side. The
pseudoinverse is dense; the row-sparse methods leave whole rows at zero.
"""
from ginv.bench import InstanceSpec, generate, render_table, run_method

spec = InstanceSpec(m=40, n=20, r=10, seed=3)
A = generate(spec)

reports = [run_method(A, method, spec=spec) for method in ("MP", "P21", "P21_L1", "P123", "LS")]
print(render_table(reports))

mp = reports[0]
for rep in reports[1:]:
    print(f"{rep.method:7s} keeps {rep.nzr} of {rep.n} rows "
          f"(pseudoinverse keeps {mp.nzr}); 1-norm {rep.norm1:.4f} vs {mp.norm1:.4f}")
