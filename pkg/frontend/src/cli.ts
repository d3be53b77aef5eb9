#!/usr/bin/env node
/**
 * Render experiment figures from the simulation package's CSV outputs.
 *
 * Usage:
 *   epicontrol-figures --input-dir OUT --panel PANEL --out FILE
 *     [--format svg|png] [--policy SOC] [--run 0] [--time T]
 *
 * Panels: coverage_vs_qx (needs sweep.csv), infected_vs_time
 * (needs timeseries.csv), snapshot (needs graph.edgelist + events/).
 */

import { writeFileSync } from "node:fs";

import { coverageVsQx, infectedVsTime, snapshot } from "./panels.js";
import { Scene, toPng, toSvg } from "./scene.js";

interface Args {
    inputDir: string;
    panel: string;
    out: string;
    format: "svg" | "png";
    policy?: string;
    run?: number;
    time?: number;
}

export function parseArgs(argv: string[]): Args {
    const opts = new Map<string, string>();
    for (let i = 0; i < argv.length; i += 2) {
        const key = argv[i];
        if (!key.startsWith("--") || i + 1 >= argv.length) {
            throw new Error(`bad argument: ${key}`);
        }
        opts.set(key.slice(2), argv[i + 1]);
    }
    for (const required of ["input-dir", "panel", "out"]) {
        if (!opts.has(required)) {
            throw new Error(`missing --${required}`);
        }
    }
    const format = (opts.get("format") ?? "svg") as Args["format"];
    if (format !== "svg" && format !== "png") {
        throw new Error(`unknown format '${format}' (svg or png)`);
    }
    return {
        inputDir: opts.get("input-dir")!,
        panel: opts.get("panel")!,
        out: opts.get("out")!,
        format,
        policy: opts.get("policy"),
        run: opts.has("run") ? Number(opts.get("run")) : undefined,
        time: opts.has("time") ? Number(opts.get("time")) : undefined,
    };
}

export function render(args: Args): Scene {
    switch (args.panel) {
        case "coverage_vs_qx":
            return coverageVsQx(args.inputDir);
        case "infected_vs_time":
            return infectedVsTime(args.inputDir);
        case "snapshot":
            return snapshot(args.inputDir, {
                policy: args.policy,
                runId: args.run,
                time: args.time,
            });
        default:
            throw new Error(
                `unknown panel '${args.panel}' (coverage_vs_qx, ` +
                `infected_vs_time, snapshot)`);
    }
}

export function main(argv: string[]): number {
    let args: Args;
    try {
        args = parseArgs(argv);
    } catch (err) {
        console.error(String(err instanceof Error ? err.message : err));
        return 2;
    }
    try {
        const scene = render(args);
        if (args.format === "png") {
            writeFileSync(args.out, toPng(scene));
        } else {
            writeFileSync(args.out, toSvg(scene));
        }
        console.log(`wrote ${args.out}`);
        return 0;
    } catch (err) {
        console.error(String(err instanceof Error ? err.message : err));
        return 1;
    }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
    process.exit(main(process.argv.slice(2)));
}
