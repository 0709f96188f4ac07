// Quiz flow against the live backend: answers graded server-side drive the
// green/red styling, flag checkboxes unlock only after grading, and flags set
// in the UI land in the quiz JSON persisted by "Confirm and Go Back".

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { QuizPanel } from "../src/quizPanel.js";
import { serverInfo } from "./serverInfo.js";

const info = serverInfo();
const api = new ApiClient(info.baseUrl);

const WORDS = ["qzalpha", "qzbravo", "qzcharlie", "qzdelta", "qzecho"];

describe("quiz flow", () => {
  beforeAll(async () => {
    for (const word of WORDS) await api.addNode(word, "qz");
  });

  it("grades answers with green/red classes and persists UI flags on confirm", async () => {
    const host = document.createElement("div");
    document.body.appendChild(host);
    const panel = new QuizPanel(host, api);
    await panel.start(3, 2, ["qz"]);

    const questions = host.querySelectorAll(".question");
    expect(questions.length).toBe(5);

    // flags must be locked until grading
    for (const box of host.querySelectorAll<HTMLInputElement>(".flag-check")) {
      expect(box.disabled).toBe(true);
    }
    expect(() => panel.setFlag(0, true)).toThrow(/after grading/);

    // two deliberate mistakes (indices 1 and 4); index 3 checks that the
    // server normalizes case and stray whitespace before comparing
    panel.setAnswer(0, "qzalpha");
    panel.setAnswer(1, "qzcharlie");
    panel.setAnswer(2, "qzcharlie");
    panel.setAnswer(3, "  QZDELTA ");
    panel.setAnswer(4, "wrong answer");

    const graded = await panel.submit();
    const expected = [true, false, true, true, false];
    expect(graded.questions.map((q) => q.is_correct)).toEqual(expected);

    graded.questions.forEach((result, i) => {
      const block = host.querySelector(`.question[data-index="${result.index}"]`)!;
      expect(block.classList.contains("correct")).toBe(expected[i]);
      expect(block.classList.contains("incorrect")).toBe(!expected[i]);
    });

    // flags unlock after grading; set two of them in the UI
    panel.setFlag(1, true);
    panel.setFlag(4, true);
    expect(panel.collectFlags()).toEqual([false, true, false, false, true]);

    const confirmed = await panel.confirmAndGoBack();
    expect(confirmed.hyper_edge_id).not.toBeNull();

    const persisted = JSON.parse(
      readFileSync(join(info.dataDir, confirmed.document), "utf-8"),
    );
    expect(persisted.questions.map((q: { flagged: boolean }) => q.flagged)).toEqual([
      false,
      true,
      false,
      false,
      true,
    ]);
    expect(persisted.questions.map((q: { is_correct: boolean }) => q.is_correct)).toEqual(
      expected,
    );
    expect(persisted.questions.map((q: { user_answer: string }) => q.user_answer)).toEqual([
      "qzalpha",
      "qzcharlie",
      "qzcharlie",
      "  QZDELTA ",
      "wrong answer",
    ]);
  });
});
