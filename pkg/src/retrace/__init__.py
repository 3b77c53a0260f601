"""retrace: open-citation analysis of retracted publications.

Pipeline modules: ingest (retraction records), harvest (citation
links + entity enrichment), affinity (humanities scoring/filtering),
timeline (period and fifth assignment), annotation (in-text citations,
decision tree, store, HTTP API), textproc (bag-of-words corpora),
topics (LDA, coherence, relevance, projections), reports (descriptive
tables and visualization bundles).
"""

__version__ = "0.1.0"
