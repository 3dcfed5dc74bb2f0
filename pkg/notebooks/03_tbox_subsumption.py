# # General knowledge in a TBox
#
# The bird facts again, this time as inclusions.  The TBox is folded into a
# single concept that every node of the tableau must satisfy.

# In[1]:

from pathlib import Path

from paralc import answer, internalize, load_ontology, parse_concept, parse_query

HERE = Path(__file__).resolve().parent
kb = load_ontology(HERE.parent / "ontologies" / "birds_tbox.onto")
print(internalize(kb.tbox))

# In[2]:

print("consistent:", answer(kb, parse_query("consistent")).verdict)
for text in ["Bird(tweety)", "Fly(tweety)", "not Fly(tweety)", "Swallow(tweety)"]:
    print(f"{text:16}", answer(kb, parse_query(text)).verdict)

# Subsumption ``C subsumedby D`` is an instance check on a fresh individual
# that is only known to be a ``C``.

# In[3]:

for sub, sup in [("Penguin", "Fly"), ("Bird", "some HasFood . Fish"), ("Fly", "Bird")]:
    q = parse_query(f"{sub} subsumedby {sup}")
    print(f"{sub} subsumedby {sup}:", answer(kb, q).verdict)

# ``Penguin subsumedby Fly`` holds because a fresh penguin is a bird and
# hence flies.  ``Fly subsumedby Bird`` holds as well, which deserves a
# second look.  Tweety's clash closes every branch of the forest with a real
# conflict, so the query only has to be touched on a single branch.  The
# contradiction about Tweety stays local to Tweety's label, but the closure
# condition is global.  Drop Tweety and the odd answer goes away.

# In[4]:

from paralc import ABox, Ontology

general = Ontology(kb.tbox, ABox.of([]))
for sub, sup in [("Penguin", "Fly"), ("Fly", "Bird")]:
    q = parse_query(f"{sub} subsumedby {sup}")
    print(f"without tweety, {sub} subsumedby {sup}:", answer(general, q).verdict)
