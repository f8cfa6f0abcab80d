/* tslint:disable */
/* eslint-disable */

/**
 * Synthetic ECG run: the `z` channel at 2000 Hz and the detected beats.
 */
export class EcgRun {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    samples(): Float64Array;
    readonly beats: number;
    readonly beats_csv: string;
    /**
     * NaN when fewer than two beats were found.
     */
    readonly mean_hr: number;
}

export class EscapeImage {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    rgba(): Uint8Array;
    readonly white_fraction: number;
}

export function ecg_run(bpm: number, noise_sd: number, seed: number, duration: number): EcgRun;

export function escape_image(mode: string, k: number, alpha: number, pixels: number, iters: number): EscapeImage;

export function stability_text(a: number, b: number, sigma: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_ecgrun_free: (a: number, b: number) => void;
    readonly __wbg_escapeimage_free: (a: number, b: number) => void;
    readonly ecg_run: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly ecgrun_beats: (a: number) => number;
    readonly ecgrun_beats_csv: (a: number) => [number, number];
    readonly ecgrun_mean_hr: (a: number) => number;
    readonly ecgrun_samples: (a: number) => [number, number];
    readonly escape_image: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly escapeimage_rgba: (a: number) => [number, number];
    readonly stability_text: (a: number, b: number, c: number) => [number, number, number, number];
    readonly escapeimage_white_fraction: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
