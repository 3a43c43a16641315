use super::{Circuit, Layout};
use crate::error::{Error, Result};

/// Explicit truth table of a function `{0,1}^n -> {0,1}^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    input_width: usize,
    output_width: usize,
    values: Vec<u64>,
}

impl FunctionTable {
    pub fn new(input_width: usize, output_width: usize, values: Vec<u64>) -> Result<Self> {
        if input_width == 0 || input_width > 20 {
            return Err(Error::Argument(format!(
                "input width {input_width} outside 1..=20"
            )));
        }
        if output_width == 0 || output_width > 63 {
            return Err(Error::Argument(format!(
                "output width {output_width} outside 1..=63"
            )));
        }
        if values.len() != 1 << input_width {
            return Err(Error::Argument(format!(
                "table has {} rows, expected 2^{input_width} = {}",
                values.len(),
                1usize << input_width
            )));
        }
        if let Some((x, v)) = values
            .iter()
            .enumerate()
            .find(|(_, &v)| v >> output_width != 0)
        {
            return Err(Error::Range(format!(
                "f({x}) = {v} does not fit {output_width} bits"
            )));
        }
        Ok(Self {
            input_width,
            output_width,
            values,
        })
    }

    pub fn from_fn(input_width: usize, output_width: usize, f: impl Fn(u64) -> u64) -> Result<Self> {
        if input_width > 20 {
            return Err(Error::Argument(format!("input width {input_width} too large")));
        }
        Self::new(
            input_width,
            output_width,
            (0..1u64 << input_width).map(f).collect(),
        )
    }

    pub fn input_width(&self) -> usize {
        self.input_width
    }

    pub fn output_width(&self) -> usize {
        self.output_width
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.values[x as usize]
    }

    /// All inputs mapping to `target`, ascending.
    pub fn preimages(&self, target: u64) -> Vec<u64> {
        (0..self.values.len() as u64)
            .filter(|&x| self.values[x as usize] == target)
            .collect()
    }
}

/// Builds the XOR-embedding `|x⟩|y⟩ -> |x⟩|y ⊕ f(x)⟩` of a truth table.
///
/// One MCX per set output bit per row; its controls spell out the row index
/// on the input register with mixed polarity.
pub fn lift_function(
    table: &FunctionTable,
    layout: &Layout,
    input: &str,
    output: &str,
) -> Result<Circuit> {
    let in_reg = layout.register(input)?;
    let out_reg = layout.register(output)?;
    if in_reg.width() != table.input_width() {
        return Err(Error::Argument(format!(
            "input register `{input}` has width {}, table expects {}",
            in_reg.width(),
            table.input_width()
        )));
    }
    if out_reg.width() != table.output_width() {
        return Err(Error::Argument(format!(
            "output register `{output}` has width {}, table produces {}",
            out_reg.width(),
            table.output_width()
        )));
    }
    let mut circuit = Circuit::new(layout.clone());
    for (x, &fx) in table.values().iter().enumerate() {
        if fx == 0 {
            continue;
        }
        let controls = in_reg.controls_for(x as u64);
        for k in (0..out_reg.width()).rev() {
            if fx >> k & 1 == 1 {
                circuit.mcx(controls.clone(), out_reg.bit(k))?;
            }
        }
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_validation() {
        assert!(matches!(
            FunctionTable::new(2, 2, vec![0, 1, 2]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            FunctionTable::new(1, 1, vec![0, 2]),
            Err(Error::Range(_))
        ));
        let t = FunctionTable::from_fn(3, 3, |x| (x + 3) % 8).unwrap();
        assert_eq!(t.eval(5), 0);
        assert_eq!(t.preimages(0), vec![5]);
    }

    #[test]
    fn zero_function_lifts_to_empty_circuit() {
        let layout = Layout::new(&[("x", 3), ("y", 2)]).unwrap();
        let t = FunctionTable::new(3, 2, vec![0; 8]).unwrap();
        assert!(lift_function(&t, &layout, "x", "y").unwrap().is_empty());
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let layout = Layout::new(&[("x", 3), ("y", 2)]).unwrap();
        let t = FunctionTable::from_fn(3, 3, |x| x).unwrap();
        assert!(matches!(
            lift_function(&t, &layout, "x", "y"),
            Err(Error::Argument(_))
        ));
    }
}
