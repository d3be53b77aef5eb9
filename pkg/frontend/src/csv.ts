import { readFileSync } from "node:fs";

export interface Table {
    columns: string[];
    rows: string[][];
}

export function parseCsv(text: string): Table {
    const lines = text.split(/\r?\n/).filter(line => line.length > 0);
    if (lines.length === 0) {
        throw new Error("empty CSV file");
    }
    const columns = lines[0].split(",");
    const rows = lines.slice(1).map(line => line.split(","));
    return { columns, rows };
}

export function readCsv(path: string): Table {
    return parseCsv(readFileSync(path, "utf-8"));
}

/** Column accessors for one table; missing columns fail by name. */
export function columnIndex(table: Table, name: string, file: string): number {
    const idx = table.columns.indexOf(name);
    if (idx < 0) {
        throw new Error(`missing column '${name}' in ${file}`);
    }
    return idx;
}

export interface SweepRow {
    qX: number;
    policy: string;
    coverageMean: number;
    coverageSem: number;
}

export function readSweep(path: string): SweepRow[] {
    const table = readCsv(path);
    const qx = columnIndex(table, "q_x", path);
    const policy = columnIndex(table, "policy", path);
    const mean = columnIndex(table, "coverage_mean", path);
    const sem = columnIndex(table, "coverage_sem", path);
    return table.rows.map(r => ({
        qX: Number(r[qx]),
        policy: r[policy],
        coverageMean: Number(r[mean]),
        coverageSem: Number(r[sem]),
    }));
}

export interface TimeseriesRow {
    policy: string;
    t: number;
    meanInfected: number;
    ciLo: number;
    ciHi: number;
}

export function readTimeseries(path: string): TimeseriesRow[] {
    const table = readCsv(path);
    const policy = columnIndex(table, "policy", path);
    const t = columnIndex(table, "t", path);
    const mean = columnIndex(table, "mean_infected", path);
    const lo = columnIndex(table, "ci_lo", path);
    const hi = columnIndex(table, "ci_hi", path);
    return table.rows.map(r => ({
        policy: r[policy],
        t: Number(r[t]),
        meanInfected: Number(r[mean]),
        ciLo: Number(r[lo]),
        ciHi: Number(r[hi]),
    }));
}

export type EventKind = "I" | "R" | "T";

export interface EventRow {
    t: number;
    node: number;
    kind: EventKind;
}

export function readEvents(path: string): EventRow[] {
    const table = readCsv(path);
    const t = columnIndex(table, "t", path);
    const node = columnIndex(table, "node", path);
    const kind = columnIndex(table, "kind", path);
    return table.rows.map(r => {
        const k = r[kind];
        if (k !== "I" && k !== "R" && k !== "T") {
            throw new Error(`unknown event kind '${k}' in ${path}`);
        }
        return { t: Number(r[t]), node: Number(r[node]), kind: k };
    });
}
