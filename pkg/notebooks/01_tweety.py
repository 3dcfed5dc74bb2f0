# # Tweety the penguin
#
# Penguins are birds, birds fly, and Tweety is a penguin that does not fly.
# Classically this knowledge base is inconsistent, so every query follows.
# Signed tableaux keep the useful answers and drop the silly ones.

# In[1]:

from pathlib import Path

from paralc import answer, load_ontology, parse_query

HERE = Path(__file__).resolve().parent
kb = load_ontology(HERE.parent / "ontologies" / "example1.onto")
print(kb)

# The facts are asserted of Tweety directly, each general rule already
# instantiated as a disjunction.

# In[2]:

for text in ["Fly(tweety)", "not Fly(tweety)", "(some HasFood . Fish)(tweety)", "Haswing(tweety)"]:
    para = answer(kb, parse_query(text)).verdict
    classical = answer(kb, parse_query(text), mode="classical").verdict
    print(f"{text:32} para={para!s:5}  classical={classical}")

# Both ``Fly`` and ``not Fly`` are entailed: the contradiction is in the
# premises and the reasoner reports it.  ``Haswing`` has nothing to do with
# the premises, and only the classical reading lets it through.

# In[3]:

result = answer(kb, parse_query("Haswing(tweety)"), exhaustive=True)
for branch, cls in result.trace.branches:
    print(cls.kind.value, [str(k) for k in cls.evidence])

# Every branch closes, but only with real conflicts between premises.  No
# branch touches the query, so the forest is not closed in the para sense.
