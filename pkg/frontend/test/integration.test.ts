/**
 * Renders every panel from real simulation outputs (checked-in fixtures
 * produced by the simulation CLI: a small comparison and a two-point q_x
 * sweep on the 49-state graph).
 */

import { existsSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";
import { STATE_COLORS } from "../src/panels.js";

const COMPARE = join(__dirname, "fixtures", "compare");
const SWEEP = join(__dirname, "fixtures", "sweep");

describe("real simulation outputs", () => {
    it("fixtures exist", () => {
        expect(existsSync(join(COMPARE, "timeseries.csv"))).toBe(true);
        expect(existsSync(join(SWEEP, "sweep.csv"))).toBe(true);
    });

    it("renders the infected-vs-time panel with bands", () => {
        const out = join(mkdtempSync(join(tmpdir(), "fig-")), "ts.svg");
        expect(main([
            "--input-dir", COMPARE, "--panel", "infected_vs_time",
            "--out", out,
        ])).toBe(0);
        const svg = readFileSync(out, "utf-8");
        expect(svg).toContain("<polygon"); // CI band
        expect((svg.match(/<polyline/g) ?? []).length).toBe(4); // 4 policies
        expect(svg).toContain("SOC");
        expect(svg).toContain("LRSR");
    });

    it("renders the coverage-vs-qx panel with SEM bands", () => {
        const out = join(mkdtempSync(join(tmpdir(), "fig-")), "cov.svg");
        expect(main([
            "--input-dir", SWEEP, "--panel", "coverage_vs_qx", "--out", out,
        ])).toBe(0);
        const svg = readFileSync(out, "utf-8");
        expect((svg.match(/<polygon/g) ?? []).length).toBe(2); // 2 policies
        expect(svg).toContain("q_x");
    });

    it("renders a snapshot with three node classes", () => {
        const out = join(mkdtempSync(join(tmpdir(), "fig-")), "snap.svg");
        expect(main([
            "--input-dir", COMPARE, "--panel", "snapshot", "--out", out,
        ])).toBe(0);
        const svg = readFileSync(out, "utf-8");
        expect(svg).toContain(STATE_COLORS.healthy);
        expect(svg).toContain(STATE_COLORS.infected);
        expect(svg).toContain(STATE_COLORS.treated);
        // all 49 state nodes drawn
        expect((svg.match(/<circle/g) ?? []).length).toBeGreaterThanOrEqual(49);
    });

    it("renders png variants", () => {
        const out = join(mkdtempSync(join(tmpdir(), "fig-")), "snap.png");
        expect(main([
            "--input-dir", COMPARE, "--panel", "snapshot", "--out", out,
            "--format", "png",
        ])).toBe(0);
        const bytes = readFileSync(out);
        expect(bytes.subarray(1, 4).toString("ascii")).toBe("PNG");
    });
});
