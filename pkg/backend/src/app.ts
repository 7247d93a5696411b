import express, { Express } from "express";

import {
  BLANK,
  FillModel,
  FillRequestSchema,
  PairScorer,
  ScoreRequestSchema,
  fillResponseViolation,
} from "./protocol.js";

export interface AppDeps {
  fillModel: FillModel;
  scorer?: PairScorer;
}

export function buildApp({ fillModel, scorer }: AppDeps): Express {
  const app = express();
  app.use(express.json({ limit: "1mb" }));

  app.get("/healthz", (_req, res) => {
    res.json({
      model: fillModel.id,
      mode: fillModel.mode,
      scorer: scorer ? scorer.id : null,
    });
  });

  app.post("/fill", (req, res) => {
    const parsed = FillRequestSchema.safeParse(req.body);
    if (!parsed.success) {
      res.status(400).json({ error: parsed.error.issues[0].message });
      return;
    }
    const { tokens, blank_index, top_k } = parsed.data;
    if (blank_index >= tokens.length) {
      res.status(400).json({ error: "blank_index out of bounds" });
      return;
    }
    if (tokens[blank_index] !== BLANK) {
      // the blank position does not line up with a blank token, so it
      // cannot be mapped onto the model input
      res.status(422).json({
        error: `token at blank_index is not ${BLANK}`,
      });
      return;
    }
    const out = fillModel.fill(tokens, blank_index, top_k);
    const violation = fillResponseViolation(out);
    if (violation) {
      res.status(500).json({ error: `bad model output: ${violation}` });
      return;
    }
    res.json(out);
  });

  app.post("/score", (req, res) => {
    if (!scorer) {
      res.status(503).json({ error: "model not trained" });
      return;
    }
    const parsed = ScoreRequestSchema.safeParse(req.body);
    if (!parsed.success) {
      res.status(400).json({ error: parsed.error.issues[0].message });
      return;
    }
    const { sent_a, sent_b } = parsed.data;
    if (
      sent_a.length === sent_b.length &&
      sent_a.every((t, i) => t === sent_b[i])
    ) {
      res.status(400).json({ error: "sent_a and sent_b are identical" });
      return;
    }
    res.json({ accept_prob: scorer.score(sent_a, sent_b) });
  });

  // malformed JSON bodies land here
  app.use(
    (
      err: Error,
      _req: express.Request,
      res: express.Response,
      next: express.NextFunction,
    ) => {
      if (res.headersSent) return next(err);
      res.status(400).json({ error: err.message });
    },
  );

  return app;
}
