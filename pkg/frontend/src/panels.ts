/** The three figure panels: coverage vs q_x, infected vs time, snapshot. */

import { existsSync, readFileSync } from "node:fs";
import { join } from "node:path";

import { readEvents, readSweep, readTimeseries } from "./csv.js";
import { readEdgeList } from "./graph.js";
import { fitToViewport, forceLayout } from "./layout.js";
import {
    MARGIN,
    drawFrame,
    drawLegend,
    linearScale,
    log10Scale,
    niceTicks,
    policyColor,
} from "./plot.js";
import { Scene } from "./scene.js";
import { statesAt, timeOfMaxTreated } from "./replay.js";

const WIDTH = 640;
const HEIGHT = 440;

export const STATE_COLORS = {
    healthy: "#4daf4a",
    infected: "#e41a1c",
    treated: "#377eb8",
};

function groupBy<T>(rows: T[], key: (row: T) => string): Map<string, T[]> {
    const out = new Map<string, T[]>();
    for (const row of rows) {
        const k = key(row);
        const bucket = out.get(k);
        if (bucket) bucket.push(row);
        else out.set(k, [row]);
    }
    return out;
}

/** Coverage against the infection-cost weight, with SEM bands. */
export function coverageVsQx(inputDir: string): Scene {
    const rows = readSweep(join(inputDir, "sweep.csv"));
    if (rows.length === 0) throw new Error("sweep.csv has no data rows");
    const scene = new Scene(WIDTH, HEIGHT);
    const byPolicy = groupBy(rows, r => r.policy);
    const qs = [...new Set(rows.map(r => r.qX))].sort((a, b) => a - b);
    const useLog = qs[0] > 0 && qs[qs.length - 1] / qs[0] >= 50;
    const x = (useLog ? log10Scale : linearScale)(
        [qs[0], qs[qs.length - 1]],
        [MARGIN.left, WIDTH - MARGIN.right]);
    const values = rows.flatMap(r => [
        r.coverageMean - r.coverageSem, r.coverageMean + r.coverageSem,
    ]);
    const y = linearScale(
        [Math.min(0, ...values), Math.max(...values) * 1.05],
        [HEIGHT - MARGIN.bottom, MARGIN.top]);
    drawFrame(scene, x, y, {
        title: "Total infection coverage vs infection cost",
        xLabel: "infection cost weight q_x",
        yLabel: "coverage (node-time)",
        xTicks: qs,
        yTicks: niceTicks(y.domain[0], y.domain[1]),
        xTickLabels: qs.map(v => String(v)),
    });
    const legend: Array<[string, string]> = [];
    let index = 0;
    for (const [policy, series] of byPolicy) {
        const color = policyColor(policy, index++);
        const sorted = [...series].sort((a, b) => a.qX - b.qX);
        const upper = sorted.map(r =>
            [x(r.qX), y(r.coverageMean + r.coverageSem)] as [number, number]);
        const lower = [...sorted].reverse().map(r =>
            [x(r.qX), y(r.coverageMean - r.coverageSem)] as [number, number]);
        scene.add({ kind: "polygon", points: [...upper, ...lower],
                    fill: color, opacity: 0.18 });
        scene.add({
            kind: "polyline",
            points: sorted.map(r => [x(r.qX), y(r.coverageMean)]),
            stroke: color, width: 2,
        });
        legend.push([policy, color]);
    }
    drawLegend(scene, legend);
    return scene;
}

/** Mean infected count over time, with 95% confidence bands. */
export function infectedVsTime(inputDir: string): Scene {
    const rows = readTimeseries(join(inputDir, "timeseries.csv"));
    if (rows.length === 0) throw new Error("timeseries.csv has no data rows");
    const scene = new Scene(WIDTH, HEIGHT);
    const byPolicy = groupBy(rows, r => r.policy);
    const tMax = Math.max(...rows.map(r => r.t));
    const x = linearScale([0, tMax], [MARGIN.left, WIDTH - MARGIN.right]);
    const yMax = Math.max(...rows.map(r => r.ciHi)) * 1.05;
    const y = linearScale([0, Math.max(yMax, 1)],
                          [HEIGHT - MARGIN.bottom, MARGIN.top]);
    drawFrame(scene, x, y, {
        title: "Infected nodes over time (95% CI)",
        xLabel: "time",
        yLabel: "infected nodes",
        xTicks: niceTicks(0, tMax),
        yTicks: niceTicks(0, y.domain[1]),
    });
    const legend: Array<[string, string]> = [];
    let index = 0;
    for (const [policy, series] of byPolicy) {
        const color = policyColor(policy, index++);
        const sorted = [...series].sort((a, b) => a.t - b.t);
        const upper = sorted.map(r => [x(r.t), y(r.ciHi)] as [number, number]);
        const lower = [...sorted].reverse()
            .map(r => [x(r.t), y(r.ciLo)] as [number, number]);
        scene.add({ kind: "polygon", points: [...upper, ...lower],
                    fill: color, opacity: 0.18 });
        scene.add({
            kind: "polyline",
            points: sorted.map(r => [x(r.t), y(r.meanInfected)]),
            stroke: color, width: 2,
        });
        legend.push([policy, color]);
    }
    drawLegend(scene, legend);
    return scene;
}

export interface SnapshotOptions {
    policy?: string;
    runId?: number;
    time?: number;
}

/**
 * Network snapshot with healthy / infected / under-treatment node classes.
 * Defaults: the SOC policy, run 0, at the time when the number of treated
 * nodes peaks. Node positions come from coords.csv (label,x,y) when
 * present, otherwise from a seeded force-directed layout.
 */
export function snapshot(inputDir: string, opts: SnapshotOptions = {}): Scene {
    const graph = readEdgeList(join(inputDir, "graph.edgelist"));
    const n = graph.labels.length;
    const policy = opts.policy ?? "SOC";
    const runId = opts.runId ?? 0;
    const events = readEvents(join(inputDir, "events", policy, `${runId}.csv`));
    const t = opts.time ?? timeOfMaxTreated(events, n);
    const { infected, treated } = statesAt(events, n, t);

    const scene = new Scene(WIDTH, HEIGHT);
    const coordsPath = join(inputDir, "coords.csv");
    let pos: Array<[number, number]>;
    if (existsSync(coordsPath)) {
        pos = readCoords(coordsPath, graph.labels);
    } else {
        pos = forceLayout(graph);
    }
    pos = fitToViewport(pos, WIDTH, HEIGHT - 30, 30)
        .map(([px, py]) => [px, py + 24] as [number, number]);

    scene.add({ kind: "text", x: WIDTH / 2, y: 18,
                s: `Node states under ${policy} (run ${runId}, t = ${t.toFixed(3)})`,
                size: 13, anchor: "middle", fill: "#111111" });
    for (const [u, v] of graph.edges) {
        scene.add({ kind: "line", x1: pos[u][0], y1: pos[u][1],
                    x2: pos[v][0], y2: pos[v][1],
                    stroke: "#bbbbbb", width: 0.8 });
    }
    for (let i = 0; i < n; i++) {
        const fill = treated[i]
            ? STATE_COLORS.treated
            : infected[i] ? STATE_COLORS.infected : STATE_COLORS.healthy;
        scene.add({ kind: "circle", cx: pos[i][0], cy: pos[i][1], r: 7,
                    fill, stroke: "#444444" });
        scene.add({ kind: "text", x: pos[i][0], y: pos[i][1] + 3,
                    s: graph.labels[i], size: 6, anchor: "middle",
                    fill: "#ffffff" });
    }
    const legend: Array<[string, string]> = [
        ["healthy", STATE_COLORS.healthy],
        ["infected", STATE_COLORS.infected],
        ["treated", STATE_COLORS.treated],
    ];
    let lx = MARGIN.left;
    for (const [label, color] of legend) {
        scene.add({ kind: "circle", cx: lx, cy: HEIGHT - 14, r: 6,
                    fill: color, stroke: "#444444" });
        scene.add({ kind: "text", x: lx + 10, y: HEIGHT - 10, s: label,
                    size: 11, anchor: "start", fill: "#111111" });
        lx += 90;
    }
    return scene;
}

function readCoords(path: string,
                    labels: string[]): Array<[number, number]> {
    const text = readFileSync(path, "utf-8");
    const lines = text.split(/\r?\n/).filter(l => l.length > 0);
    const header = lines[0].split(",");
    const li = header.indexOf("label");
    const xi = header.indexOf("x");
    const yi = header.indexOf("y");
    if (li < 0 || xi < 0 || yi < 0) {
        throw new Error(`missing column 'label', 'x', or 'y' in ${path}`);
    }
    const byLabel = new Map<string, [number, number]>();
    for (const line of lines.slice(1)) {
        const parts = line.split(",");
        byLabel.set(parts[li], [Number(parts[xi]), -Number(parts[yi])]);
    }
    return labels.map(label => {
        const p = byLabel.get(label);
        if (!p) throw new Error(`coords.csv has no entry for node '${label}'`);
        return p;
    });
}
