/**
 * Wire types for the annotation service API, validated with zod so a
 * malformed response fails loudly instead of rendering garbage.
 */

import { z } from "zod";

export const ModeSchema = z.enum(["self", "pairwise"]);
export type Mode = z.infer<typeof ModeSchema>;

export const GoldItemSchema = z.object({
  key: z.string(),
  mode: ModeSchema,
  doc1_chunk: z.string(),
  doc2_chunk: z.string(),
  context1: z.string().default(""),
  context2: z.string().default(""),
  sources: z.array(z.string()).default([]),
  human_label: z.number().int().nullable().default(null),
  adjudicated: z.boolean().default(false),
});
export type GoldItem = z.infer<typeof GoldItemSchema>;

export const QueueResponseSchema = z.object({
  item: GoldItemSchema.nullable(),
  remaining: z.number().int(),
});
export type QueueResponse = z.infer<typeof QueueResponseSchema>;

export const AgreementReportSchema = z.object({
  percent_agreement: z.number().nullable(),
  cohen_kappa: z.number().nullable(),
  kripp_alpha: z.number().nullable(),
  n_items: z.number().int(),
  n_annotators: z.number().int(),
  reasons: z.record(z.string(), z.string()).default({}),
});
export type AgreementReport = z.infer<typeof AgreementReportSchema>;

export const ItemDetailSchema = GoldItemSchema.extend({
  labels: z.record(z.string(), z.number().int()).default({}),
  agreement: z.number().nullable().default(null),
});
export type ItemDetail = z.infer<typeof ItemDetailSchema>;

export const AdjudicationQueueSchema = z.object({
  items: z.array(GoldItemSchema),
});

export const GoldExportSchema = z.object({
  items: z.array(GoldItemSchema),
});

export interface LabelSubmission {
  annotator: string;
  key: string;
  label: 0 | 1;
}

export interface AdjudicationSubmission {
  sme: string;
  key: string;
  label: 0 | 1;
}
