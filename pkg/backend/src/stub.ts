import { readFileSync } from "node:fs";
import { basename } from "node:path";
import { z } from "zod";

import {
  BLANK,
  FillModel,
  FillResponse,
  MASS_TOLERANCE,
} from "./protocol.js";

// entries as [token, prob] pairs, highest first after load
const EntriesSchema = z
  .array(z.tuple([z.string().regex(/^\S+$/), z.number().positive().max(1)]))
  .nonempty();

const StubFileSchema = z
  .object({
    default: EntriesSchema,
    byPrev: z.record(EntriesSchema).default({}),
  })
  .strict();

type Entries = [string, number][];

function checkMass(name: string, entries: Entries) {
  const total = entries.reduce((acc, [, p]) => acc + p, 0);
  if (total > 1 + MASS_TOLERANCE) {
    throw new Error(`stub distribution "${name}" has mass ${total} > 1`);
  }
  for (const [token] of entries) {
    if (token.startsWith("##")) {
      throw new Error(`stub token "${token}" looks like a subword fragment`);
    }
  }
}

function sortDescending(entries: Entries): Entries {
  return [...entries].sort((a, b) => b[1] - a[1]);
}

/**
 * Canned fill-mask model backed by a JSON file. The distribution is
 * picked by the token immediately left of the blank ("byPrev"), falling
 * back to "default". Deterministic, no weights, meant for CI and for
 * integration tests of clients.
 */
export class StubFillModel implements FillModel {
  readonly id: string;
  readonly mode = "stub" as const;
  private readonly dists: Map<string, Entries>;
  private readonly fallback: Entries;

  constructor(doc: unknown, id = "stub") {
    const parsed = StubFileSchema.parse(doc);
    checkMass("default", parsed.default);
    this.fallback = sortDescending(parsed.default);
    this.dists = new Map();
    for (const [prev, entries] of Object.entries(parsed.byPrev)) {
      checkMass(prev, entries);
      this.dists.set(prev, sortDescending(entries));
    }
    this.id = id;
  }

  static fromFile(path: string): StubFillModel {
    let doc: unknown;
    try {
      doc = JSON.parse(readFileSync(path, "utf-8"));
    } catch (err) {
      throw new Error(`cannot load stub distributions from ${path}: ${err}`);
    }
    return new StubFillModel(doc, basename(path));
  }

  fill(tokens: string[], blankIndex: number, topK: number): FillResponse {
    const prev = blankIndex > 0 ? tokens[blankIndex - 1] : "";
    const full = (prev !== BLANK && this.dists.get(prev)) || this.fallback;
    const entries = full.slice(0, topK);
    const served = entries.reduce((acc, [, p]) => acc + p, 0);
    return {
      entries: entries.map(([t, p]): [string, number] => [t, p]),
      residual_mass: Math.max(0, 1 - served),
    };
  }
}
