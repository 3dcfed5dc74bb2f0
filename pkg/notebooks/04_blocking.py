# # Termination on cyclic inclusions
#
# ``A subclassof some R . A`` asks for an infinite chain of ``R``-successors.
# Pairwise blocking stops the expansion once a node and its parent repeat an
# ancestor pair.

# In[1]:

from pathlib import Path

from paralc import load_ontology
from paralc.reasoner import classical_consistency
from paralc.tableau import blocking_status

HERE = Path(__file__).resolve().parent
kb = load_ontology(HERE.parent / "ontologies" / "cyclic.onto")
result = classical_consistency(kb)
print("consistent:", result.verdict)

# In[2]:

branch, cls = result.trace.branches[-1]
status = blocking_status(branch)
for node, label in branch.labels.items():
    s = status[node]
    blocked = f"  <- {s.kind}ly blocked by {s.by}" if s.kind == "direct" else f"  ({s.kind})"
    print(f"{node}: {{{', '.join(map(str, label))}}}{blocked}")

# The open branch is a finite description of an infinite model: unravel the
# blocked node back onto its blocker.
