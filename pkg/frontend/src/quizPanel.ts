// Quiz flow: generate questions, collect answers, grade, then show results
// with green/red highlighting. Flag checkboxes stay disabled until grading;
// "Confirm and Go Back" sends the flags and persists the quiz server-side.

import type { ApiClient, GradedQuiz, QuizView } from "./api.js";
import { escapeHtml } from "./text.js";

export class QuizPanel {
  private quiz: QuizView | null = null;
  private graded: GradedQuiz | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private onDone?: () => void,
  ) {}

  async start(nMcq: number, nFib: number, languageFilter?: string[]): Promise<void> {
    this.quiz = null;
    this.graded = null;
    this.root.innerHTML = `<p class="status">Generating quiz…</p>`;
    try {
      this.quiz = await this.api.createQuiz(nMcq, nFib, languageFilter);
    } catch (error) {
      const message = error instanceof Error ? error.message : String(error);
      this.root.innerHTML = `<p class="status error">Quiz generation failed: ${escapeHtml(message)}</p>`;
      return;
    }
    this.renderQuestions();
  }

  private renderQuestions(): void {
    const quiz = this.quiz!;
    const blocks = quiz.questions.map((q) => {
      const answerControl =
        q.kind === "mcq"
          ? q.options
              .map(
                (option, oi) => `
            <label class="option">
              <input type="radio" name="q${q.index}" class="mcq-option" value="${escapeHtml(option)}" data-opt="${oi}">
              ${escapeHtml(option)}
            </label>`,
              )
              .join("")
          : `<input type="text" class="fib-answer" name="q${q.index}" autocomplete="off">`;
      return `
        <div class="question" data-index="${q.index}" data-kind="${q.kind}">
          <div class="question-prompt">${escapeHtml(q.prompt_text)}</div>
          <div class="question-answers">${answerControl}</div>
          <label class="flag-label">
            <input type="checkbox" class="flag-check" data-index="${q.index}" disabled>
            Flag this question
          </label>
          <div class="question-verdict"></div>
        </div>`;
    });
    const warnings = quiz.warnings.length
      ? `<p class="quiz-warnings">${escapeHtml(quiz.warnings.join(" "))}</p>`
      : "";
    this.root.innerHTML = `
      ${warnings}
      <form class="quiz-form">${blocks.join("")}</form>
      <button class="submit-quiz" type="button">Submit answers</button>
      <button class="confirm-quiz" type="button" disabled>Confirm and Go Back</button>
      <p class="status"></p>`;
    this.root.querySelector(".submit-quiz")!.addEventListener("click", () => {
      void this.submit();
    });
    this.root.querySelector(".confirm-quiz")!.addEventListener("click", () => {
      void this.confirmAndGoBack();
    });
  }

  // Current answers in question order; unanswered questions submit "".
  collectAnswers(): string[] {
    const quiz = this.quiz!;
    return quiz.questions.map((q) => {
      const block = this.root.querySelector(`.question[data-index="${q.index}"]`)!;
      if (q.kind === "mcq") {
        const chosen = block.querySelector<HTMLInputElement>(".mcq-option:checked");
        return chosen ? chosen.value : "";
      }
      return block.querySelector<HTMLInputElement>(".fib-answer")!.value;
    });
  }

  setAnswer(index: number, answer: string): void {
    const block = this.root.querySelector(`.question[data-index="${index}"]`)!;
    if (block.getAttribute("data-kind") === "mcq") {
      for (const option of block.querySelectorAll<HTMLInputElement>(".mcq-option")) {
        option.checked = option.value === answer;
      }
    } else {
      block.querySelector<HTMLInputElement>(".fib-answer")!.value = answer;
    }
  }

  async submit(): Promise<GradedQuiz> {
    const quiz = this.quiz;
    if (!quiz) throw new Error("no quiz in progress");
    this.graded = await this.api.gradeQuiz(quiz.quiz_id, this.collectAnswers());
    for (const result of this.graded.questions) {
      const block = this.root.querySelector(`.question[data-index="${result.index}"]`)!;
      block.classList.remove("correct", "incorrect");
      block.classList.add(result.is_correct ? "correct" : "incorrect");
      const verdict = block.querySelector(".question-verdict")!;
      verdict.innerHTML = result.is_correct
        ? `<span class="verdict-correct">Correct</span>`
        : `<span class="verdict-incorrect">Incorrect — answer: ${escapeHtml(result.correct_answer)}</span>`;
      block.querySelector<HTMLInputElement>(".flag-check")!.disabled = false;
      for (const input of block.querySelectorAll<HTMLInputElement>("input.mcq-option, input.fib-answer")) {
        input.disabled = true;
      }
    }
    this.root.querySelector<HTMLButtonElement>(".submit-quiz")!.disabled = true;
    this.root.querySelector<HTMLButtonElement>(".confirm-quiz")!.disabled = false;
    return this.graded;
  }

  setFlag(index: number, flagged: boolean): void {
    const box = this.root.querySelector<HTMLInputElement>(`.flag-check[data-index="${index}"]`);
    if (!box) throw new Error(`no question with index ${index}`);
    if (box.disabled) throw new Error("flags are enabled only after grading");
    box.checked = flagged;
  }

  collectFlags(): boolean[] {
    const quiz = this.quiz!;
    return quiz.questions.map((q) => {
      const box = this.root.querySelector<HTMLInputElement>(`.flag-check[data-index="${q.index}"]`)!;
      return box.checked;
    });
  }

  async confirmAndGoBack(): Promise<{
    document: string;
    hyper_edge_id: string | null;
    warning: string | null;
  }> {
    const quiz = this.quiz;
    if (!quiz || !this.graded) throw new Error("quiz must be graded before confirming");
    await this.api.setFlags(quiz.quiz_id, this.collectFlags());
    const result = await this.api.confirmQuiz(quiz.quiz_id);
    const status = this.root.querySelector(".status");
    if (status) status.textContent = "Quiz saved.";
    this.onDone?.();
    return result;
  }
}
