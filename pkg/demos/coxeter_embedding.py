"""The right-angled Coxeter group on a1..a3, b1..b3 split into two
sentence-trees, then squeezed into bounded-valence trees by diaries."""
from treembed import coxeter as cx
from treembed.h2embed import coxeter_diary, distortion_report, embed

g = cx.reduce("b1 a2 a3 b2 a1 b1".split())
print("element          ", cx.format_element(g))
print("a-left word      ", cx.format_element(cx.a_left_rep(g)))
print("b-left word      ", cx.format_element(cx.b_left_rep(g)))
print("A-sentence       ", " | ".join(".".join(w) for w in cx.F_A(g)))
print("B-sentence       ", " | ".join(".".join(w) for w in cx.F_B(g)))
print("sphere sizes R<=5", cx.sphere_sizes(5))

diary = coxeter_diary()
print(f"\ndiary constants: M={diary.guarantee}, kappa={diary.kappa}")
A, B = embed(g, diary)
print("image heights   ", len(A), len(B))

print("\nAll pairs in the radius-4 ball:")
rep = distortion_report(4, keep_rows=False)
for key, value in rep.summary().items():
    print(f"  {key:18} {value}")

print("\n2000 sampled pairs from the radius-8 ball:")
rep = distortion_report(8, n_pairs=2000, seed=1, keep_rows=False)
print("  criteria used     ", rep.criteria)
print("  worst d_G/d_DF    ", rep.max_distortion, "(bound", 2 * rep.M, ")")
