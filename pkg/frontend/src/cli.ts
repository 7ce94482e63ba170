import { writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { FIGURE_KINDS, FigureKind, renderFigure } from "./figures.js";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .option("kind", {
      choices: FIGURE_KINDS,
      demandOption: true,
      describe: "figure kind to render",
    })
    .option("in", {
      type: "string",
      demandOption: true,
      describe: "input file (results.csv, sweep.json, or trace.csv)",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output SVG path",
    })
    .strict()
    .parseSync();

  try {
    const svg = renderFigure(args.kind as FigureKind, args.in);
    writeFileSync(args.out, svg);
  } catch (err) {
    console.error(`${args.kind}: ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(hideBin(process.argv)));
}
