# # Contradictions without explosion
#
# ``A(a)`` and ``not A(a)`` together entail any ``B(a)`` classically.  Here we
# check that the signed reading never does this, on a batch of random names.

# In[1]:

import random

from paralc import ABox, Atomic, ConceptAssertion, Not, Ontology, TBox, classical_entails, para_entails

rng = random.Random(0)
names = [f"P{i}" for i in range(10)]
rows = []
for _ in range(10):
    a, b = rng.sample(names, 2)
    kb = Ontology(TBox(()), ABox.of([ConceptAssertion(Atomic(a), "x"), ConceptAssertion(Not(Atomic(a)), "x")]))
    q = ConceptAssertion(Atomic(b), "x")
    rows.append((a, b, para_entails(kb, q).verdict, classical_entails(kb, q)))

for a, b, para, classical in rows:
    print(f"{a}, not {a}  |-  {b}:  para={para}  classical={classical}")

# The familiar inferences survive.  Modus ponens from ``A`` and
# ``not A or B``:

# In[2]:

from paralc import parse_ontology, parse_query, answer

kb = parse_ontology("abox: A(x) . (not A or B)(x) .")
print("B(x):", answer(kb, parse_query("B(x)")).verdict)

# ... and even with an unrelated contradiction next to it.

# In[3]:

kb = parse_ontology("abox: A(x) . (not A or B)(x) . C(x) . not C(x) .")
print("B(x):", answer(kb, parse_query("B(x)")).verdict)
print("D(x):", answer(kb, parse_query("D(x)")).verdict)
