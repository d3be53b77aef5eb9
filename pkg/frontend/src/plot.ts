/** Axis scaffolding and policy colors shared by the chart panels. */

import { Scene } from "./scene.js";

export const MARGIN = { left: 62, right: 16, top: 34, bottom: 46 };

export const POLICY_COLORS: Record<string, string> = {
    SOC: "#d62728",
    T: "#1f77b4",
    "T-FL": "#17becf",
    MN: "#2ca02c",
    "MN-FL": "#98df8a",
    LN: "#9467bd",
    "LN-FL": "#c5b0d5",
    LRSR: "#ff7f0e",
};

export function policyColor(policy: string, index: number): string {
    return POLICY_COLORS[policy] ?? ["#8c564b", "#e377c2", "#7f7f7f"][index % 3];
}

export interface Scale {
    (value: number): number;
    readonly domain: [number, number];
}

export function linearScale(domain: [number, number],
                            range: [number, number]): Scale {
    const [d0, d1] = domain;
    const [r0, r1] = range;
    const span = d1 - d0 || 1;
    const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
    (fn as { domain: [number, number] }).domain = domain;
    return fn;
}

export function log10Scale(domain: [number, number],
                           range: [number, number]): Scale {
    const inner = linearScale(
        [Math.log10(domain[0]), Math.log10(domain[1])], range);
    const fn = ((v: number) => inner(Math.log10(v))) as Scale;
    (fn as { domain: [number, number] }).domain = domain;
    return fn;
}

export function niceTicks(lo: number, hi: number, count = 6): number[] {
    const span = hi - lo || 1;
    const step0 = span / Math.max(count - 1, 1);
    const mag = 10 ** Math.floor(Math.log10(step0));
    const step = [1, 2, 5, 10].map(m => m * mag)
        .find(s => span / s <= count) ?? 10 * mag;
    const start = Math.ceil(lo / step) * step;
    const ticks: number[] = [];
    for (let v = start; v <= hi + 1e-9 * span; v += step) {
        ticks.push(Math.abs(v) < 1e-12 ? 0 : v);
    }
    return ticks;
}

const fmt = (v: number) =>
    Math.abs(v) >= 1000 || (v !== 0 && Math.abs(v) < 0.01)
        ? v.toExponential(0) : String(Math.round(v * 100) / 100);

export function drawFrame(
    scene: Scene,
    x: Scale, y: Scale,
    opts: { title: string; xLabel: string; yLabel: string;
            xTicks: number[]; yTicks: number[]; xTickLabels?: string[] },
): void {
    const x0 = MARGIN.left;
    const x1 = scene.width - MARGIN.right;
    const y0 = scene.height - MARGIN.bottom;
    const y1 = MARGIN.top;
    scene.add({ kind: "line", x1: x0, y1: y0, x2: x1, y2: y0,
                stroke: "#333333", width: 1 });
    scene.add({ kind: "line", x1: x0, y1: y0, x2: x0, y2: y1,
                stroke: "#333333", width: 1 });
    opts.xTicks.forEach((t, i) => {
        const px = x(t);
        scene.add({ kind: "line", x1: px, y1: y0, x2: px, y2: y0 + 4,
                    stroke: "#333333", width: 1 });
        scene.add({ kind: "text", x: px, y: y0 + 17,
                    s: opts.xTickLabels ? opts.xTickLabels[i] : fmt(t),
                    size: 10, anchor: "middle", fill: "#333333" });
    });
    for (const t of opts.yTicks) {
        const py = y(t);
        scene.add({ kind: "line", x1: x0 - 4, y1: py, x2: x0, y2: py,
                    stroke: "#333333", width: 1 });
        scene.add({ kind: "text", x: x0 - 7, y: py + 3, s: fmt(t),
                    size: 10, anchor: "end", fill: "#333333" });
        scene.add({ kind: "line", x1: x0, y1: py, x2: x1, y2: py,
                    stroke: "#eeeeee", width: 0.5 });
    }
    scene.add({ kind: "text", x: (x0 + x1) / 2, y: scene.height - 12,
                s: opts.xLabel, size: 12, anchor: "middle", fill: "#111111" });
    scene.add({ kind: "text", x: 16, y: MARGIN.top - 14, s: opts.yLabel,
                size: 12, anchor: "start", fill: "#111111" });
    scene.add({ kind: "text", x: (x0 + x1) / 2, y: 16, s: opts.title,
                size: 13, anchor: "middle", fill: "#111111" });
}

export function drawLegend(scene: Scene, entries: Array<[string, string]>): void {
    const x0 = scene.width - MARGIN.right - 86;
    let y = MARGIN.top + 8;
    for (const [label, color] of entries) {
        scene.add({ kind: "line", x1: x0, y1: y - 3, x2: x0 + 18, y2: y - 3,
                    stroke: color, width: 2.5 });
        scene.add({ kind: "text", x: x0 + 23, y, s: label, size: 10,
                    anchor: "start", fill: "#111111" });
        y += 14;
    }
}
