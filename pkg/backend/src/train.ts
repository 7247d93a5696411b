#!/usr/bin/env node
// Offline training job: fit the pair classifier on PairExample JSONL
// (the output of `sluaug filter-pairs`) and save it for the server.
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { readPairs, trainFromPairs } from "./classifier.js";

async function main() {
  const argv = await yargs(hideBin(process.argv))
    .option("pairs", { type: "string", demandOption: true })
    .option("out", { type: "string", demandOption: true })
    .option("holdout", { type: "number", default: 0.2 })
    .option("epochs", { type: "number", default: 8 })
    .option("seed", { type: "number", default: 17 })
    .strict()
    .parse();

  const pairs = readPairs(argv.pairs);
  const { model, report } = trainFromPairs(pairs, {
    holdout: argv.holdout,
    epochs: argv.epochs,
    seed: argv.seed,
  });
  model.save(argv.out);
  console.error(
    `trained on ${report.train} pairs, held-out accuracy ${report.accuracy.toFixed(4)}`,
  );
  process.stdout.write(JSON.stringify(report) + "\n");
}

main().catch((err) => {
  console.error(err instanceof Error ? err.message : err);
  process.exit(1);
});
