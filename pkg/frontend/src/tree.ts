// Decision-tree wizard: a pure state machine over the tree config.
// Each step asks one question; the path (macro, subcategory, row,
// option) resolves to a citation intent. The guide sentence previews
// the current choices so annotators read the sentence they are
// asserting.

import type { DecisionTreeConfig, TreeMacro } from "./types.js";

export interface WizardStep {
  complete: boolean;
  question: "macro_category" | "subcategory" | "row" | "option" | null;
  options: string[];
  intent: string | null;
  guideSentence: string | null;
}

export class TreeWizard {
  private config: DecisionTreeConfig;
  path: string[] = [];

  constructor(config: DecisionTreeConfig) {
    this.config = config;
  }

  private macro(): TreeMacro | null {
    if (this.path.length === 0) return null;
    const macro = this.config.macros.find((m) => m.name === this.path[0]);
    if (!macro) throw new Error(`invalid macro category: ${this.path[0]}`);
    return macro;
  }

  state(): WizardStep {
    const guide = this.macro()?.guide_sentence ?? null;
    if (this.path.length === 0) {
      return {
        complete: false,
        question: "macro_category",
        options: this.config.macros.map((m) => m.name),
        intent: null,
        guideSentence: null,
      };
    }
    const macro = this.macro()!;
    if (this.path.length === 1) {
      return {
        complete: false,
        question: "subcategory",
        options: macro.columns.map((c) => c.name),
        intent: null,
        guideSentence: guide,
      };
    }
    const column = macro.columns.find((c) => c.name === this.path[1]);
    if (!column) throw new Error(`invalid subcategory: ${this.path[1]}`);
    if (this.path.length === 2) {
      return {
        complete: false,
        question: "row",
        options: column.rows.map((r) => r.row),
        intent: null,
        guideSentence: guide,
      };
    }
    const row = column.rows.find((r) => r.row === this.path[2]);
    if (!row) throw new Error(`invalid row: ${this.path[2]}`);
    if (this.path.length === 3) {
      return {
        complete: false,
        question: "option",
        options: row.options.map((o) => o.key),
        intent: null,
        guideSentence: guide,
      };
    }
    const option = row.options.find((o) => o.key === this.path[3]);
    if (!option) throw new Error(`invalid option: ${this.path[3]}`);
    return {
      complete: true,
      question: null,
      options: [],
      intent: option.function,
      guideSentence: guide,
    };
  }

  choose(selection: string): WizardStep {
    const current = this.state();
    if (current.complete) throw new Error("path already complete");
    if (!current.options.includes(selection)) {
      throw new Error(
        `invalid ${current.question}: ${selection}; valid: ${current.options.join(", ")}`,
      );
    }
    this.path.push(selection);
    return this.state();
  }

  back(): WizardStep {
    this.path.pop();
    return this.state();
  }

  reset(): WizardStep {
    this.path = [];
    return this.state();
  }

  /** Guide sentence with the current choices substituted in. */
  renderedGuide(): string | null {
    const macro = this.macro();
    if (!macro?.guide_sentence) return null;
    const header = this.path[1] ?? "…";
    let intent: string = "…";
    if (this.path.length === 4) {
      const state = this.state();
      intent = (state.intent ?? "…").replace(/_/g, " ");
    }
    return macro.guide_sentence
      .replace("<HEADER>", header)
      .replace("<FUNCTION>", intent);
  }

  /** Label displayed for an option key (the intent name on leaves). */
  optionLabel(key: string): string {
    if (this.path.length !== 3) return key;
    const macro = this.macro();
    const column = macro?.columns.find((c) => c.name === this.path[1]);
    const row = column?.rows.find((r) => r.row === this.path[2]);
    const option = row?.options.find((o) => o.key === key);
    return option ? `(${key}) ${option.function.replace(/_/g, " ")}` : key;
  }
}
