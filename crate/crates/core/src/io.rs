//! File formats: matrices (text and binary), graphs, and solver results
//! (JSON and CSV).
//!
//! Matrix text: a `rows cols` line, then `rows` lines of `cols` characters
//! from `{0,1}`.
//!
//! Matrix binary: a 16-byte header (`BMAT`, then `rows`, `cols` and the word
//! size `64` as little-endian `u32`), followed by each row as
//! `⌈cols/64⌉` little-endian `u64` words, bit `c % 64` of word `c / 64`
//! holding column `c`.
//!
//! Graph text: a `n m [weighted]` line, `m` lines `u v`, and for weighted
//! graphs one more line of `n` reals.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolmat::{BoolMatrix, MatrixError, WitnessLists, WitnessMatrix};
use crate::graphs::{Dag, EdgeApex, GraphError, TwoEdgePaths, VertexWeightedGraph};

/// Version of every JSON document written by this crate.
pub const SCHEMA: u32 = 1;

const MAGIC: &[u8; 4] = b"BMAT";

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a binary matrix file")]
    BadMagic,
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T, E = IoError> = std::result::Result<T, E>;

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MatrixFormat {
    #[default]
    Text,
    Binary,
}

pub fn write_matrix_text<W: Write>(mut w: W, m: &BoolMatrix) -> Result<()> {
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    let mut line = Vec::with_capacity(m.cols() + 1);
    for i in 0..m.rows() {
        line.clear();
        line.extend((0..m.cols()).map(|j| if m.get(i, j) { b'1' } else { b'0' }));
        line.push(b'\n');
        w.write_all(&line)?;
    }
    Ok(())
}

fn parse_dims(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(|t| t.parse::<usize>());
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(r)), Some(Ok(c)), None) => Ok((r, c)),
        _ => Err(parse_err(lineno, "expected `rows cols`")),
    }
}

pub fn read_matrix_text<R: BufRead>(r: R) -> Result<BoolMatrix> {
    let mut lines = r.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (lineno, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let (rows, cols) = parse_dims(&header?, lineno)?;
    let mut m = BoolMatrix::zeros(rows, cols)?;
    let mut row = 0;
    for (lineno, line) in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if row == rows {
            return Err(parse_err(lineno, "more rows than declared"));
        }
        if line.len() != cols {
            return Err(parse_err(
                lineno,
                format!("expected {cols} characters, got {}", line.len()),
            ));
        }
        for (j, c) in line.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => m.set(row, j, true),
                _ => {
                    return Err(parse_err(
                        lineno,
                        format!("unexpected character {:?}", c as char),
                    ))
                }
            }
        }
        row += 1;
    }
    if row != rows {
        return Err(parse_err(
            rows + 1,
            format!("expected {rows} rows, got {row}"),
        ));
    }
    Ok(m)
}

pub fn write_matrix_binary<W: Write>(mut w: W, m: &BoolMatrix) -> Result<()> {
    w.write_all(MAGIC)?;
    for v in [m.rows() as u32, m.cols() as u32, 64] {
        w.write_all(&v.to_le_bytes())?;
    }
    for word in m.words() {
        w.write_all(&word.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_matrix_binary<R: Read>(mut r: R) -> Result<BoolMatrix> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if &header[..4] != MAGIC {
        return Err(IoError::BadMagic);
    }
    let field =
        |k: usize| u32::from_le_bytes(header[4 * k..4 * k + 4].try_into().unwrap()) as usize;
    let (rows, cols, word_bits) = (field(1), field(2), field(3));
    if word_bits != 64 {
        return Err(parse_err(0, format!("unsupported word size {word_bits}")));
    }
    let count = rows * cols.div_ceil(64);
    let mut bytes = vec![0u8; count * 8];
    r.read_exact(&mut bytes)?;
    let words = bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(BoolMatrix::from_words(rows, cols, words)?)
}

/// Reads a matrix file in either format, told apart by the magic bytes.
pub fn read_matrix_file(path: &Path) -> Result<BoolMatrix> {
    let mut r = BufReader::new(File::open(path)?);
    if r.fill_buf()?.starts_with(MAGIC) {
        read_matrix_binary(r)
    } else {
        read_matrix_text(r)
    }
}

pub fn write_matrix_file(path: &Path, m: &BoolMatrix, format: MatrixFormat) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        MatrixFormat::Text => write_matrix_text(&mut w, m)?,
        MatrixFormat::Binary => write_matrix_binary(&mut w, m)?,
    }
    w.flush()?;
    Ok(())
}

/// Parsed graph file.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphText {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub weights: Option<Vec<f64>>,
}

impl GraphText {
    pub fn to_dag(&self) -> Result<Dag> {
        Ok(Dag::new(self.n, &self.edges)?)
    }

    /// Graph with the file's weights, or all-zero weights (ties then go by id).
    pub fn to_weighted(&self, directed: bool) -> Result<VertexWeightedGraph> {
        let weights = self.weights.clone().unwrap_or_else(|| vec![0.0; self.n]);
        Ok(if directed {
            VertexWeightedGraph::directed(self.n, &self.edges, weights)?
        } else {
            VertexWeightedGraph::undirected(self.n, &self.edges, weights)?
        })
    }

    pub fn from_dag(dag: &Dag) -> Self {
        Self {
            n: dag.n(),
            edges: dag.edges().collect(),
            weights: None,
        }
    }

    pub fn from_weighted(g: &VertexWeightedGraph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().collect(),
            weights: Some(g.weights().to_vec()),
        }
    }
}

pub fn read_graph_text<R: BufRead>(r: R) -> Result<GraphText> {
    let mut lines = r
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty()));
    let (lineno, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let (n, m, weighted) = match tokens.as_slice() {
        [n, m] => (n, m, false),
        [n, m, "weighted"] => (n, m, true),
        _ => return Err(parse_err(lineno, "expected `n m [weighted]`")),
    };
    let n: usize = n
        .parse()
        .map_err(|_| parse_err(lineno, "bad vertex count"))?;
    let m: usize = m.parse().map_err(|_| parse_err(lineno, "bad edge count"))?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| parse_err(lineno + edges.len() + 1, "missing edge line"))?;
        let line = line?;
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => return Err(parse_err(lineno, "expected `u v`")),
        }
    }
    let weights = if weighted {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, "missing weight line"))?;
        let ws: Vec<f64> = line?
            .split_whitespace()
            .map(str::parse::<f64>)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err(lineno, "bad weight"))?;
        if ws.len() != n {
            return Err(parse_err(
                lineno,
                format!("expected {n} weights, got {}", ws.len()),
            ));
        }
        Some(ws)
    } else {
        None
    };
    if let Some((lineno, _)) = lines.next() {
        return Err(parse_err(lineno, "trailing input"));
    }
    Ok(GraphText { n, edges, weights })
}

pub fn write_graph_text<W: Write>(mut w: W, g: &GraphText) -> Result<()> {
    let suffix = if g.weights.is_some() { " weighted" } else { "" };
    writeln!(w, "{} {}{}", g.n, g.edges.len(), suffix)?;
    for (u, v) in &g.edges {
        writeln!(w, "{u} {v}")?;
    }
    if let Some(ws) = &g.weights {
        let line: Vec<String> = ws.iter().map(|x| x.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn read_graph_file(path: &Path) -> Result<GraphText> {
    read_graph_text(BufReader::new(File::open(path)?))
}

fn shift(x: usize, one_based: bool) -> usize {
    x + usize::from(one_based)
}

fn unshift(x: usize, one_based: bool) -> Result<usize> {
    if one_based {
        x.checked_sub(1)
            .ok_or_else(|| parse_err(0, "index 0 in a one-based file"))
    } else {
        Ok(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub i: usize,
    pub j: usize,
    pub witness: usize,
    /// Path weight, for two-edge path results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

/// JSON form of a [`WitnessMatrix`]; absent entries are omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub schema: u32,
    pub n: usize,
    /// Column count when it differs from `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    #[serde(default)]
    pub one_based: bool,
    pub entries: Vec<WitnessEntry>,
    /// Run metadata; ignored when reading results back.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

impl WitnessFile {
    pub fn from_matrix(w: &WitnessMatrix, one_based: bool) -> Self {
        let entries = w
            .iter()
            .map(|(i, j, k)| WitnessEntry {
                i: shift(i, one_based),
                j: shift(j, one_based),
                witness: shift(k, one_based),
                weight: None,
            })
            .collect();
        Self {
            schema: SCHEMA,
            n: w.rows(),
            cols: (w.cols() != w.rows()).then_some(w.cols()),
            one_based,
            entries,
            meta: None,
        }
    }

    pub fn from_paths(p: &TwoEdgePaths, one_based: bool) -> Self {
        let mut file = Self::from_matrix(&p.middles, one_based);
        for e in &mut file.entries {
            let (i, j) = (e.i - usize::from(one_based), e.j - usize::from(one_based));
            e.weight = p.get(i, j).map(|(_, w)| w);
        }
        file
    }

    pub fn to_matrix(&self) -> Result<WitnessMatrix> {
        if self.schema != SCHEMA {
            return Err(IoError::Schema(self.schema));
        }
        let cols = self.cols.unwrap_or(self.n);
        let mut w = WitnessMatrix::new(self.n, cols);
        for e in &self.entries {
            let (i, j, k) = (
                unshift(e.i, self.one_based)?,
                unshift(e.j, self.one_based)?,
                unshift(e.witness, self.one_based)?,
            );
            if i >= self.n || j >= cols {
                return Err(MatrixError::IndexOutOfRange {
                    row: i,
                    col: j,
                    rows: self.n,
                    cols,
                }
                .into());
            }
            w.set(i, j, Some(k));
        }
        Ok(w)
    }
}

pub fn write_witness_json<W: Write>(w: W, file: &WitnessFile) -> Result<()> {
    write_json(w, file)
}

pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_witness_json<R: Read>(r: R) -> Result<WitnessFile> {
    Ok(serde_json::from_reader(r)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    i: usize,
    j: usize,
    witness: usize,
}

/// CSV form `i,j,witness` with a header row; absent entries omitted.
pub fn write_witness_csv<W: Write>(w: W, m: &WitnessMatrix, one_based: bool) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (i, j, k) in m.iter() {
        out.serialize(CsvRow {
            i: shift(i, one_based),
            j: shift(j, one_based),
            witness: shift(k, one_based),
        })?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_witness_csv<R: Read>(
    r: R,
    rows: usize,
    cols: usize,
    one_based: bool,
) -> Result<WitnessMatrix> {
    let mut w = WitnessMatrix::new(rows, cols);
    for row in csv::Reader::from_reader(r).deserialize() {
        let row: CsvRow = row?;
        let (i, j, k) = (
            unshift(row.i, one_based)?,
            unshift(row.j, one_based)?,
            unshift(row.witness, one_based)?,
        );
        if i >= rows || j >= cols {
            return Err(MatrixError::IndexOutOfRange {
                row: i,
                col: j,
                rows,
                cols,
            }
            .into());
        }
        w.set(i, j, Some(k));
    }
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListEntry {
    pub i: usize,
    pub j: usize,
    pub witnesses: Vec<usize>,
}

/// JSON form of [`WitnessLists`]; empty lists omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ListsFile {
    pub schema: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    pub k: usize,
    #[serde(default)]
    pub one_based: bool,
    pub entries: Vec<ListEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

impl ListsFile {
    pub fn from_lists(l: &WitnessLists, one_based: bool) -> Self {
        let mut entries = Vec::new();
        for i in 0..l.rows() {
            for j in 0..l.cols() {
                let list = l.get(i, j);
                if !list.is_empty() {
                    entries.push(ListEntry {
                        i: shift(i, one_based),
                        j: shift(j, one_based),
                        witnesses: list.iter().map(|&k| shift(k as usize, one_based)).collect(),
                    });
                }
            }
        }
        Self {
            schema: SCHEMA,
            n: l.rows(),
            cols: (l.cols() != l.rows()).then_some(l.cols()),
            k: l.k(),
            one_based,
            entries,
            meta: None,
        }
    }

    pub fn to_lists(&self) -> Result<WitnessLists> {
        if self.schema != SCHEMA {
            return Err(IoError::Schema(self.schema));
        }
        let cols = self.cols.unwrap_or(self.n);
        let mut l = WitnessLists::new(self.n, cols, self.k);
        for e in &self.entries {
            let (i, j) = (unshift(e.i, self.one_based)?, unshift(e.j, self.one_based)?);
            if i >= self.n || j >= cols {
                return Err(MatrixError::IndexOutOfRange {
                    row: i,
                    col: j,
                    rows: self.n,
                    cols,
                }
                .into());
            }
            let list = e
                .witnesses
                .iter()
                .map(|&k| unshift(k, self.one_based).map(|k| k as u32))
                .collect::<Result<_>>()?;
            l.set(i, j, list);
        }
        Ok(l)
    }
}

/// CSV form `i,j,witnesses` with the list `;`-separated, decreasing.
pub fn write_lists_csv<W: Write>(w: W, l: &WitnessLists, one_based: bool) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["i", "j", "witnesses"])?;
    for e in ListsFile::from_lists(l, one_based).entries {
        let list: Vec<String> = e.witnesses.iter().map(|k| k.to_string()).collect();
        out.write_record([e.i.to_string(), e.j.to_string(), list.join(";")])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleEntry {
    pub u: usize,
    pub v: usize,
    pub apex: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleFile {
    pub schema: u32,
    pub n: usize,
    #[serde(default)]
    pub one_based: bool,
    pub entries: Vec<TriangleEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

impl TriangleFile {
    pub fn new(n: usize, edges: &[EdgeApex], one_based: bool) -> Self {
        let entries = edges
            .iter()
            .map(|e| TriangleEntry {
                u: shift(e.u, one_based),
                v: shift(e.v, one_based),
                apex: e.apex.map(|a| shift(a, one_based)),
            })
            .collect();
        Self {
            schema: SCHEMA,
            n,
            one_based,
            entries,
            meta: None,
        }
    }
}

/// CSV form `u,v,apex`, `apex` empty when the edge is on no triangle.
pub fn write_triangles_csv<W: Write>(w: W, file: &TriangleFile) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for e in &file.entries {
        out.serialize(e)?;
    }
    out.flush()?;
    Ok(())
}

/// CSV form `i,j,witness,weight` for two-edge paths.
pub fn write_paths_csv<W: Write>(w: W, file: &WitnessFile) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["i", "j", "witness", "weight"])?;
    for e in &file.entries {
        let weight = e.weight.map(|x| x.to_string()).unwrap_or_default();
        out.write_record([
            e.i.to_string(),
            e.j.to_string(),
            e.witness.to_string(),
            weight,
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolmat::max_witness_oracle;

    #[test]
    fn matrix_text_round_trip() {
        let m = BoolMatrix::random_rect(7, 70, 0.4, 1).unwrap();
        let mut buf = Vec::new();
        write_matrix_text(&mut buf, &m).unwrap();
        assert_eq!(read_matrix_text(&buf[..]).unwrap(), m);
        let text = "2 3\n101\n010\n";
        let m = read_matrix_text(text.as_bytes()).unwrap();
        assert!(m.get(0, 0) && !m.get(0, 1) && m.get(0, 2) && m.get(1, 1));
    }

    #[test]
    fn matrix_text_errors() {
        for bad in [
            "",
            "2\n",
            "2 2\n10\n",
            "2 2\n10\n1x\n",
            "1 2\n101\n",
            "1 1\n1\n0\n",
        ] {
            assert!(read_matrix_text(bad.as_bytes()).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn matrix_binary_round_trip() {
        let m = BoolMatrix::random_rect(5, 130, 0.5, 2).unwrap();
        let mut buf = Vec::new();
        write_matrix_binary(&mut buf, &m).unwrap();
        assert_eq!(buf.len(), 16 + 5 * 3 * 8);
        assert_eq!(&buf[..4], b"BMAT");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 5);
        assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 130);
        assert_eq!(read_matrix_binary(&buf[..]).unwrap(), m);
        assert!(matches!(
            read_matrix_binary(&b"NOPE0000000000000000"[..]),
            Err(IoError::BadMagic)
        ));
        assert!(read_matrix_binary(&buf[..buf.len() - 1]).is_err());
    }

    #[test]
    fn graph_round_trip() {
        let g = GraphText {
            n: 3,
            edges: vec![(0, 1), (1, 2)],
            weights: Some(vec![0.5, -1.0, 2.25]),
        };
        let mut buf = Vec::new();
        write_graph_text(&mut buf, &g).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "3 2 weighted\n0 1\n1 2\n0.5 -1 2.25\n"
        );
        assert_eq!(read_graph_text(&buf[..]).unwrap(), g);
        let plain = read_graph_text("2 1\n0 1\n".as_bytes()).unwrap();
        assert_eq!(plain.weights, None);
        assert!(plain.to_dag().is_ok());
        for bad in [
            "",
            "2 1\n",
            "2 1\n0\n",
            "2 0 weighted\n1.0\n",
            "2 0\n0 1\n",
            "2 0 heavy\n",
        ] {
            assert!(read_graph_text(bad.as_bytes()).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn witness_json_and_csv_round_trip() {
        let a = BoolMatrix::random(12, 0.3, 3).unwrap();
        let b = BoolMatrix::random(12, 0.3, 4).unwrap();
        let w = max_witness_oracle(&a, &b).unwrap();
        for one_based in [false, true] {
            let file = WitnessFile::from_matrix(&w, one_based);
            let mut buf = Vec::new();
            write_witness_json(&mut buf, &file).unwrap();
            assert_eq!(read_witness_json(&buf[..]).unwrap().to_matrix().unwrap(), w);
            let mut buf = Vec::new();
            write_witness_csv(&mut buf, &w, one_based).unwrap();
            assert!(buf.starts_with(b"i,j,witness\n"));
            assert_eq!(read_witness_csv(&buf[..], 12, 12, one_based).unwrap(), w);
        }
        let json: serde_json::Value =
            serde_json::to_value(WitnessFile::from_matrix(&w, false)).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["n"], 12);
        assert_eq!(json["entries"].as_array().unwrap().len(), w.present_count());
        assert!(json.get("cols").is_none() && json.get("meta").is_none());
    }

    #[test]
    fn lists_round_trip() {
        let mut l = WitnessLists::new(2, 3, 3);
        l.set(0, 1, vec![4, 9, 2]);
        l.set(1, 2, vec![0]);
        let file = ListsFile::from_lists(&l, true);
        assert_eq!(
            file.entries[0],
            ListEntry {
                i: 1,
                j: 2,
                witnesses: vec![10, 5, 3]
            }
        );
        assert_eq!(file.to_lists().unwrap(), l);
        let mut buf = Vec::new();
        write_lists_csv(&mut buf, &l, false).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "i,j,witnesses\n0,1,9;4;2\n1,2,0\n"
        );
    }
}
