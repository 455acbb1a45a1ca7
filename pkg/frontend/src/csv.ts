/**
 * RFC 4180 style CSV reader with one extension: lines whose first
 * character is `#` (outside any quoted field) are metadata comments.
 * They are collected separately so callers can inspect run parameters.
 */

export interface CsvFile {
  comments: string[];
  header: string[];
  rows: string[][];
}

export class CsvError extends Error {}

/** Splits raw text into records, honoring quotes across CRLF/LF alike. */
export function parseCsv(text: string): CsvFile {
  const comments: string[] = [];
  const records: string[][] = [];
  let field = "";
  let record: string[] = [];
  let inQuotes = false;
  let fieldStarted = false;
  let atLineStart = true;
  let lineComment = false;
  let i = 0;

  const endField = () => {
    record.push(field);
    field = "";
    fieldStarted = false;
  };
  const endRecord = () => {
    if (lineComment) {
      comments.push(field);
      field = "";
    } else if (record.length > 0 || fieldStarted || field.length > 0) {
      endField();
      records.push(record);
    }
    record = [];
    lineComment = false;
    atLineStart = true;
  };

  while (i < text.length) {
    const ch = text[i] as string;
    if (lineComment) {
      if (ch === "\n") {
        endRecord();
      } else if (ch !== "\r") {
        field += ch;
      }
      i += 1;
      continue;
    }
    if (inQuotes) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i += 2;
          continue;
        }
        inQuotes = false;
        i += 1;
        continue;
      }
      field += ch;
      i += 1;
      continue;
    }
    if (atLineStart && ch === "#") {
      lineComment = true;
      i += 1;
      continue;
    }
    atLineStart = false;
    if (ch === '"') {
      if (fieldStarted || field.length > 0) {
        throw new CsvError(`stray quote inside unquoted field at offset ${i}`);
      }
      inQuotes = true;
      fieldStarted = true;
      i += 1;
      continue;
    }
    if (ch === ",") {
      endField();
      i += 1;
      continue;
    }
    if (ch === "\r" && text[i + 1] === "\n") {
      endRecord();
      i += 2;
      continue;
    }
    if (ch === "\n") {
      endRecord();
      i += 1;
      continue;
    }
    field += ch;
    fieldStarted = true;
    i += 1;
  }
  if (inQuotes) {
    throw new CsvError("unterminated quoted field");
  }
  endRecord();

  if (records.length === 0) {
    throw new CsvError("no header row found");
  }
  const header = records[0] as string[];
  const rows = records.slice(1);
  rows.forEach((row, index) => {
    if (row.length !== header.length) {
      throw new CsvError(
        `row ${index + 1} has ${row.length} fields, header has ${header.length}`,
      );
    }
  });
  return { comments, header, rows };
}

/** Pulls a `key=value` token out of a metadata comment, if present. */
export function commentValue(comments: string[], key: string): string | null {
  const pattern = new RegExp(`(?:^|\\s)${key}=([^\\s]+)`);
  for (const comment of comments) {
    const match = pattern.exec(comment);
    if (match) {
      return match[1] as string;
    }
  }
  return null;
}
