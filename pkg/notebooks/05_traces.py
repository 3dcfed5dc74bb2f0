# # JSON traces
#
# A trace lists every branch with its labels and conflicts, in surface
# syntax.  The closure verdict can be recomputed from the labels alone.

# In[1]:

import json
from pathlib import Path

from paralc import answer, load_ontology, parse_query
from paralc.frontend import emit_trace, is_faithful, recompute_closed

HERE = Path(__file__).resolve().parent
kb = load_ontology(HERE.parent / "ontologies" / "example1.onto")
doc = emit_trace(answer(kb, parse_query("Fly(tweety)"), exhaustive=True))
print(json.dumps(doc["branches"][0], indent=1)[:800])

# In[2]:

print("branches:", len(doc["branches"]))
print("faithful:", is_faithful(doc), " recomputed closed:", recompute_closed(doc))

# Without ``exhaustive=True`` only the deciding branch is kept.  The trace
# says so, and its closure cannot be recomputed.

# In[3]:

partial = emit_trace(answer(kb, parse_query("Fly(tweety)")))
print("exhaustive:", partial["exhaustive"], " branches:", len(partial["branches"]))
