#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { buildApp } from "./app.js";
import { PairClassifier } from "./classifier.js";
import { StubFillModel } from "./stub.js";

async function main() {
  const argv = await yargs(hideBin(process.argv))
    .option("port", { type: "number", default: 8765 })
    .option("stub", {
      type: "string",
      describe: "serve canned distributions from this JSON file",
    })
    .option("classifier", {
      type: "string",
      describe: "trained pair classifier produced by sluaug-train-pairs",
    })
    .strict()
    .parse();

  if (!argv.stub) {
    console.error(
      "no model configured: pass --stub <distributions.json> " +
        "(real model serving needs downloaded weights)",
    );
    process.exit(2);
  }
  const fillModel = StubFillModel.fromFile(argv.stub);
  const scorer = argv.classifier
    ? PairClassifier.load(argv.classifier)
    : undefined;
  if (!scorer) {
    console.error("no classifier loaded; /score will answer 503");
  }

  const app = buildApp({ fillModel, scorer });
  const server = app.listen(argv.port, () => {
    const addr = server.address();
    const port = typeof addr === "object" && addr ? addr.port : argv.port;
    console.error(
      `sluaug-backend listening on :${port} (model=${fillModel.id}, mode=${fillModel.mode})`,
    );
  });
}

main().catch((err) => {
  console.error(err instanceof Error ? err.message : err);
  process.exit(1);
});
