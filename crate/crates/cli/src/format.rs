//! Matrix files.
//!
//! Text: optional `#` comment lines, a `rows cols` header, then one line of
//! `0`/`1` characters per row. Every line ends in `\n`; no other whitespace is
//! allowed.
//!
//! Binary: the magic `DSRGB1\n`, rows and cols as little-endian `u64`, then each
//! row packed into `ceil(cols / 8)` bytes, most significant bit first, with
//! zero padding.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use dsrg_core::BinaryMatrix;

pub const BINARY_MAGIC: &[u8; 7] = b"DSRGB1\n";

/// Text files past this size are refused in both directions.
pub const TEXT_LIMIT_BYTES: u64 = 2 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Text,
    Binary,
}

impl MatrixFormat {
    /// `.bin` and `.dsrgb` mean binary; everything else is text.
    pub fn from_extension(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin" | "dsrgb") => MatrixFormat::Binary,
            _ => MatrixFormat::Text,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            MatrixFormat::Text => "txt",
            MatrixFormat::Binary => "bin",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("binary matrix: {0}")]
    Binary(String),
    #[error(
        "{bytes} bytes exceeds the {limit}-byte limit of the text format; use the binary format"
    )]
    TextTooLarge { bytes: u64, limit: u64 },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Matrix(#[from] dsrg_core::Error),
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Size in bytes of the text encoding (header included).
pub fn text_size(m: &BinaryMatrix) -> u64 {
    let header = format!("{} {}\n", m.rows(), m.cols()).len() as u64;
    header + m.rows() as u64 * (m.cols() as u64 + 1)
}

pub fn binary_size(m: &BinaryMatrix) -> u64 {
    BINARY_MAGIC.len() as u64 + 16 + m.rows() as u64 * m.cols().div_ceil(8) as u64
}

pub fn write_text(m: &BinaryMatrix, out: &mut impl Write) -> Result<(), FormatError> {
    let bytes = text_size(m);
    if bytes > TEXT_LIMIT_BYTES {
        return Err(FormatError::TextTooLarge {
            bytes,
            limit: TEXT_LIMIT_BYTES,
        });
    }
    writeln!(out, "{} {}", m.rows(), m.cols())?;
    let mut line = vec![b'0'; m.cols() + 1];
    line[m.cols()] = b'\n';
    for i in 0..m.rows() {
        line[..m.cols()].fill(b'0');
        m.for_each_one_in_row(i, |j| line[j] = b'1');
        out.write_all(&line)?;
    }
    Ok(())
}

pub fn to_text(m: &BinaryMatrix) -> Result<Vec<u8>, FormatError> {
    let mut out = Vec::with_capacity(text_size(m).min(TEXT_LIMIT_BYTES) as usize);
    write_text(m, &mut out)?;
    Ok(out)
}

fn parse_dimension(field: &str, line: usize, column: usize) -> Result<usize, FormatError> {
    if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(
            line,
            column,
            format!("expected a decimal integer, found {field:?}"),
        ));
    }
    match field.parse::<usize>() {
        Ok(0) => Err(parse_error(line, column, "dimensions must be positive")),
        Ok(n) => Ok(n),
        Err(_) => Err(parse_error(line, column, "dimension out of range")),
    }
}

/// Parses the text format. Positions in errors are 1-based.
pub fn parse_text(data: &[u8]) -> Result<BinaryMatrix, FormatError> {
    if data.len() as u64 > TEXT_LIMIT_BYTES {
        return Err(FormatError::TextTooLarge {
            bytes: data.len() as u64,
            limit: TEXT_LIMIT_BYTES,
        });
    }
    let mut lines = data
        .split_inclusive(|&b| b == b'\n')
        .enumerate()
        .map(|(n, l)| (n + 1, l));
    let terminated = |number: usize, raw: &'_ [u8]| -> Result<usize, FormatError> {
        match raw.last() {
            Some(b'\n') => Ok(raw.len() - 1),
            _ => Err(parse_error(
                number,
                raw.len() + 1,
                "line is not terminated by a newline",
            )),
        }
    };

    let (rows, cols, header_line) = loop {
        let Some((number, raw)) = lines.next() else {
            return Err(parse_error(1, 1, "missing \"rows cols\" header"));
        };
        let len = terminated(number, raw)?;
        let body = &raw[..len];
        if body.first() == Some(&b'#') {
            continue;
        }
        let text = std::str::from_utf8(body)
            .map_err(|e| parse_error(number, e.valid_up_to() + 1, "invalid UTF-8"))?;
        let mut fields = text.split(' ');
        let (Some(r), Some(c), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_error(
                number,
                1,
                "header must be \"rows cols\" separated by one space",
            ));
        };
        let rows = parse_dimension(r, number, 1)?;
        let cols = parse_dimension(c, number, r.len() + 2)?;
        break (rows, cols, number);
    };

    let mut m = BinaryMatrix::zeros(rows, cols)?;
    for i in 0..rows {
        let Some((number, raw)) = lines.next() else {
            return Err(parse_error(
                header_line + i + 1,
                1,
                format!("expected {rows} rows, found {i}"),
            ));
        };
        let len = terminated(number, raw)?;
        for (j, &b) in raw[..len].iter().enumerate() {
            if j >= cols {
                return Err(parse_error(
                    number,
                    j + 1,
                    format!("row is longer than {cols} columns"),
                ));
            }
            match b {
                b'0' => {}
                b'1' => m.set(i, j, true),
                other => {
                    return Err(parse_error(
                        number,
                        j + 1,
                        format!("unexpected character {:?}", other as char),
                    ));
                }
            }
        }
        if len < cols {
            return Err(parse_error(
                number,
                len + 1,
                format!("row has {len} columns, expected {cols}"),
            ));
        }
    }
    if let Some((number, _)) = lines.next() {
        return Err(parse_error(
            number,
            1,
            "unexpected content after the last row",
        ));
    }
    Ok(m)
}

pub fn write_binary(m: &BinaryMatrix, out: &mut impl Write) -> Result<(), FormatError> {
    out.write_all(BINARY_MAGIC)?;
    out.write_all(&(m.rows() as u64).to_le_bytes())?;
    out.write_all(&(m.cols() as u64).to_le_bytes())?;
    let row_bytes = m.cols().div_ceil(8);
    let mut buf = Vec::with_capacity(m.stride() * 8);
    for i in 0..m.rows() {
        buf.clear();
        for w in m.row_words(i) {
            buf.extend_from_slice(&w.to_be_bytes());
        }
        out.write_all(&buf[..row_bytes])?;
    }
    Ok(())
}

pub fn to_binary(m: &BinaryMatrix) -> Result<Vec<u8>, FormatError> {
    let mut out = Vec::with_capacity(binary_size(m) as usize);
    write_binary(m, &mut out)?;
    Ok(out)
}

pub fn parse_binary(data: &[u8]) -> Result<BinaryMatrix, FormatError> {
    let bad = |msg: &str| FormatError::Binary(msg.to_string());
    if data.len() < BINARY_MAGIC.len() + 16 || &data[..BINARY_MAGIC.len()] != BINARY_MAGIC {
        return Err(bad("missing DSRGB1 header"));
    }
    let field = |at: usize| u64::from_le_bytes(data[at..at + 8].try_into().expect("eight bytes"));
    let base = BINARY_MAGIC.len();
    let (rows, cols) = (field(base), field(base + 8));
    if rows == 0 || cols == 0 {
        return Err(bad("dimensions must be positive"));
    }
    let (Ok(rows), Ok(cols)) = (usize::try_from(rows), usize::try_from(cols)) else {
        return Err(bad("dimensions do not fit in memory"));
    };
    let row_bytes = cols.div_ceil(8);
    let payload = &data[base + 16..];
    if rows.checked_mul(row_bytes) != Some(payload.len()) {
        return Err(FormatError::Binary(format!(
            "payload has {} bytes, expected {rows} x {row_bytes}",
            payload.len()
        )));
    }
    let stride = cols.div_ceil(64);
    let mut words = vec![0u64; rows * stride];
    for (i, row) in payload.chunks_exact(row_bytes).enumerate() {
        for (w, chunk) in row.chunks(8).enumerate() {
            let mut bytes = [0u8; 8];
            bytes[..chunk.len()].copy_from_slice(chunk);
            words[i * stride + w] = u64::from_be_bytes(bytes);
        }
    }
    BinaryMatrix::from_words(rows, cols, words).map_err(|_| bad("padding bits are not zero"))
}

/// Reads either format, recognising binary files by their magic.
pub fn parse_matrix(data: &[u8]) -> Result<(BinaryMatrix, MatrixFormat), FormatError> {
    if data.starts_with(BINARY_MAGIC) {
        Ok((parse_binary(data)?, MatrixFormat::Binary))
    } else {
        Ok((parse_text(data)?, MatrixFormat::Text))
    }
}

pub fn encode(m: &BinaryMatrix, format: MatrixFormat) -> Result<Vec<u8>, FormatError> {
    match format {
        MatrixFormat::Text => to_text(m),
        MatrixFormat::Binary => to_binary(m),
    }
}

pub fn read_matrix(path: &Path) -> Result<(BinaryMatrix, MatrixFormat), FormatError> {
    let size = fs::metadata(path)?.len();
    let mut head = [0u8; 7];
    let is_binary = {
        use std::io::Read;
        let mut f = fs::File::open(path)?;
        f.read(&mut head)? == head.len() && &head == BINARY_MAGIC
    };
    if !is_binary && size > TEXT_LIMIT_BYTES {
        return Err(FormatError::TextTooLarge {
            bytes: size,
            limit: TEXT_LIMIT_BYTES,
        });
    }
    parse_matrix(&fs::read(path)?)
}

/// Writes `m` and returns the bytes written, for digesting.
pub fn write_matrix(
    path: &Path,
    m: &BinaryMatrix,
    format: MatrixFormat,
) -> Result<Vec<u8>, FormatError> {
    let bytes = encode(m, format)?;
    fs::write(path, &bytes)?;
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> BinaryMatrix {
        BinaryMatrix::from_rows(&[[0u8, 1, 1, 0, 1, 0, 0, 0, 1], [1, 0, 0, 0, 0, 0, 0, 0, 0]])
            .unwrap()
    }

    #[test]
    fn text_layout() {
        assert_eq!(to_text(&sample()).unwrap(), b"2 9\n011010001\n100000000\n");
    }

    #[test]
    fn binary_layout() {
        let bytes = to_binary(&sample()).unwrap();
        let mut expect = b"DSRGB1\n".to_vec();
        expect.extend_from_slice(&2u64.to_le_bytes());
        expect.extend_from_slice(&9u64.to_le_bytes());
        expect.extend_from_slice(&[0b0110_1000, 0b1000_0000, 0b1000_0000, 0]);
        assert_eq!(bytes, expect);
        assert_eq!(bytes.len() as u64, binary_size(&sample()));
    }

    #[test]
    fn comments_before_header() {
        let m = parse_text(b"# seed\n#\n2 2\n01\n10\n").unwrap();
        assert_eq!(m, BinaryMatrix::exchange(2).unwrap());
    }

    fn parse_err(data: &[u8]) -> (usize, usize) {
        match parse_text(data) {
            Err(FormatError::Parse { line, column, .. }) => (line, column),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(parse_err(b"2 2\n01\n1x\n"), (3, 2));
        assert_eq!(parse_err(b"2 2\n01 \n10\n"), (2, 3));
        assert_eq!(parse_err(b"2 2\n01\n10"), (3, 3));
        assert_eq!(parse_err(b"2 2\n01\n"), (3, 1));
        assert_eq!(parse_err(b"2 2\n01\n1\n"), (3, 2));
        assert_eq!(parse_err(b"2 2 \n01\n10\n"), (1, 1));
        assert_eq!(parse_err(b"2 x\n"), (1, 3));
        assert_eq!(parse_err(b"0 2\n"), (1, 1));
        assert_eq!(parse_err(b"2 2\n01\n10\n\n"), (4, 1));
        assert_eq!(parse_err(b"2 2\r\n01\n10\n"), (1, 3));
        assert_eq!(parse_err(b""), (1, 1));
    }

    #[test]
    fn binary_errors() {
        let mut bytes = to_binary(&sample()).unwrap();
        assert!(matches!(
            parse_binary(&bytes[..bytes.len() - 1]),
            Err(FormatError::Binary(_))
        ));
        let last = bytes.len() - 1;
        bytes[last] = 1;
        assert!(matches!(parse_binary(&bytes), Err(FormatError::Binary(_))));
        assert!(matches!(
            parse_binary(b"DSRGB2\n"),
            Err(FormatError::Binary(_))
        ));
    }

    #[test]
    fn format_detection() {
        let m = sample();
        assert_eq!(
            parse_matrix(&to_binary(&m).unwrap()).unwrap(),
            (m.clone(), MatrixFormat::Binary)
        );
        assert_eq!(
            parse_matrix(&to_text(&m).unwrap()).unwrap(),
            (m, MatrixFormat::Text)
        );
    }

    fn matrices() -> impl Strategy<Value = BinaryMatrix> {
        (1usize..=70, 1usize..=140).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c)
                .prop_map(move |bits| BinaryMatrix::from_fn(r, c, |i, j| bits[i * c + j]).unwrap())
        })
    }

    proptest! {
        #[test]
        fn round_trips(m in matrices()) {
            let text = to_text(&m).unwrap();
            let binary = to_binary(&m).unwrap();
            prop_assert_eq!(&parse_text(&text).unwrap(), &m);
            prop_assert_eq!(&parse_binary(&binary).unwrap(), &m);
            prop_assert_eq!(to_text(&parse_binary(&binary).unwrap()).unwrap(), text);
        }
    }
}
