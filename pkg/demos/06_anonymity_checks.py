"""
k-anonymity and l-diversity of a small table
============================================

Rows sharing the same quasi-identifiers form an equivalence class. The
table is k-anonymous when every class has at least k rows, and l-diverse
when every class has at least l distinct sensitive values.
"""

from localpriv import Dataset, check_k_anonymity, check_l_diversity, equivalence_classes

table = Dataset(
    columns=("zip", "age", "disease"),
    rows=(("130**", "<30", "flu"), ("130**", "<30", "flu"), ("148**", ">=40", "cold"),
          ("130**", "<30", "cancer"), ("148**", ">=40", "flu")),
    quasi=("zip", "age"),
    sensitive="disease",
)
print("classes:", equivalence_classes(table))
for k in (2, 3):
    print(f"k={k}:", check_k_anonymity(table, k).to_dict())
for l in (2, 3):
    print(f"l={l}:", check_l_diversity(table, l).to_dict())
