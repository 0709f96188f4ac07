// Typed client for the backend REST API. All state lives server-side; the UI
// renders from responses and never mutates optimistically.

export interface WordNode {
  id: string;
  word: string;
  language: string;
  annotation: string;
  tags: string[];
  click_count: number;
  used_for_expansion: boolean;
  created_at: string;
  updated_at: string;
}

export interface WordEdge {
  id: string;
  source: string;
  target: string;
  label: string;
  tags: string[];
  description: string;
}

export interface HyperEdge {
  id: string;
  node_ids: string[];
  doc_type: string;
  document_ref: string;
  created_at: string;
}

export interface GraphPayload {
  version: number;
  nodes: WordNode[];
  edges: WordEdge[];
  hyper_edges: HyperEdge[];
}

export interface Subgraph {
  nodes: WordNode[];
  edges: WordEdge[];
  hyper_edges: HyperEdge[];
}

export interface Candidate {
  word: string;
  language: string;
  relation: string;
  gloss: string;
  already_known: boolean;
}

export interface CommitReport {
  created_nodes: string[];
  created_edges: string[];
  skipped: { word: string; reason: string }[];
}

export interface QuizQuestionView {
  index: number;
  kind: "mcq" | "fib";
  prompt_text: string;
  options: string[];
}

export interface QuizView {
  quiz_id: string;
  generated_at: string;
  model: string;
  warnings: string[];
  questions: QuizQuestionView[];
}

export interface GradedQuestion extends QuizQuestionView {
  correct_answer: string;
  user_answer: string;
  is_correct: boolean;
  flagged: boolean;
}

export interface GradedQuiz {
  quiz_id: string;
  questions: GradedQuestion[];
}

export interface HyperEdgeDocument extends HyperEdge {
  document: string | null;
  words: string[];
}

export class ApiError extends Error {
  constructor(public status: number, public code: string, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(response.status, payload.code ?? "Error",
        payload.message ?? response.statusText);
    }
    return payload as T;
  }

  graph(): Promise<GraphPayload> {
    return this.request("GET", "/api/graph");
  }

  addNode(word: string, language: string, annotation = "", tags: string[] = []): Promise<WordNode> {
    return this.request("POST", "/api/nodes", { word, language, annotation, tags });
  }

  patchNode(id: string, patch: { word?: string; annotation?: string; tags?: string[] }): Promise<WordNode> {
    return this.request("PATCH", `/api/nodes/${id}`, patch);
  }

  deleteElement(id: string): Promise<{ nodes: string[]; edges: string[]; hyper_edges: string[] }> {
    return this.request("DELETE", `/api/elements/${id}`);
  }

  addEdge(source: string, target: string, label = "", tags: string[] = [], description = ""): Promise<WordEdge> {
    return this.request("POST", "/api/edges", { source, target, label, tags, description });
  }

  patchEdge(id: string, patch: { label?: string; tags?: string[]; description?: string }): Promise<WordEdge> {
    return this.request("PATCH", `/api/edges/${id}`, patch);
  }

  click(id: string): Promise<{ id: string; click_count: number }> {
    return this.request("POST", `/api/nodes/${id}/click`);
  }

  subgraph(id: string, radius = 1): Promise<Subgraph> {
    return this.request("GET", `/api/nodes/${id}/subgraph?radius=${radius}`);
  }

  nodesWithTag(tag: string): Promise<{ tag: string; node_ids: string[] }> {
    return this.request("GET", `/api/tags/${encodeURIComponent(tag)}`);
  }

  find(word: string, language: string): Promise<{ id: string | null }> {
    const params = new URLSearchParams({ word, language });
    return this.request("GET", `/api/find?${params}`);
  }

  expand(chosenNode: string, targetLanguages: string[], maxCandidates = 10): Promise<{ candidates: Candidate[] }> {
    return this.request("POST", "/api/expand", {
      chosen_node: chosenNode,
      target_languages: targetLanguages,
      max_candidates: maxCandidates,
    });
  }

  commitExpansion(chosenNode: string, selected: Candidate[]): Promise<CommitReport> {
    return this.request("POST", "/api/expand/commit", {
      chosen_node: chosenNode,
      selected,
    });
  }

  createQuiz(nMcq: number, nFib: number, languageFilter?: string[]): Promise<QuizView> {
    return this.request("POST", "/api/quiz", {
      n_mcq: nMcq,
      n_fib: nFib,
      language_filter: languageFilter ?? null,
    });
  }

  gradeQuiz(quizId: string, answers: string[]): Promise<GradedQuiz> {
    return this.request("POST", `/api/quiz/${quizId}/grade`, { answers });
  }

  setFlags(quizId: string, flags: boolean[]): Promise<GradedQuiz> {
    return this.request("POST", `/api/quiz/${quizId}/flags`, { flags });
  }

  confirmQuiz(quizId: string): Promise<{ document: string; hyper_edge_id: string | null; warning: string | null }> {
    return this.request("POST", `/api/quiz/${quizId}/confirm`);
  }

  snapshots(): Promise<{ snapshots: string[] }> {
    return this.request("GET", "/api/snapshots");
  }

  createSnapshot(name: string): Promise<{ name: string }> {
    return this.request("POST", "/api/snapshots", { name });
  }

  restoreSnapshot(name: string): Promise<{ restored: string; snapshots: string[] }> {
    return this.request("POST", `/api/snapshots/${encodeURIComponent(name)}/restore`);
  }

  hyperEdgeDocument(id: string): Promise<HyperEdgeDocument> {
    return this.request("GET", `/api/hyper_edges/${id}`);
  }
}
