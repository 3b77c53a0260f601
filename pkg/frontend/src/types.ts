// Shared types mirroring the annotation API's JSON shapes.

export interface CitationContext {
  preceding: string | null;
  anchor: string;
  following: string | null;
}

export interface Citation {
  id: string;
  citing_entity_id: string;
  cited_item_id: string;
  pointer_text: string;
  section: string;
  context: CitationContext;
  sentiment: string | null;
  intent: string | null;
  mentions_retraction: boolean | null;
}

export interface CitationResponse {
  citation: Citation;
  annotation: AnnotationRecord | null;
  history_length: number;
}

export interface AnnotationRecord {
  seq: number;
  citation_id: string;
  sentiment: string;
  intent: string;
  mentions_retraction: boolean;
  annotator: string;
  timestamp: number;
}

export interface AnnotationBody {
  sentiment: string;
  intent: string;
  mentions_retraction: boolean;
  annotator: string;
}

export interface TreeOption {
  key: string;
  function: string;
}

export interface TreeRow {
  row: string;
  options: TreeOption[];
}

export interface TreeColumn {
  name: string;
  rows: TreeRow[];
}

export interface TreeMacro {
  name: string;
  guide_sentence?: string;
  columns: TreeColumn[];
}

export interface DecisionTreeConfig {
  version: number;
  vocabulary: string[];
  macros: TreeMacro[];
}

export interface TopicMapData {
  distance_matrix: number[][];
  coords_2d: number[][];
  topic_share: number[];
}

export interface GroupedTable {
  group_key: string;
  rows: Record<string, number[]>;
  doc_counts: Record<string, number>;
}

export interface VisBundle {
  version: number;
  k: number;
  vocabulary: string[];
  phi: number[][];
  p_w: number[];
  default_lambda: number;
  top_n: number;
  topic_map: TopicMapData;
  relevance: Record<string, unknown>;
  grouped: Record<string, GroupedTable>;
  corpus_hash: string;
}

export type Sentiment = "positive" | "negative" | "neutral";
